"""Survey crossing pairs (non-cospectral vertices with equal subgraph centrality at some beta).

For every connected graph up to --nmax vertices, every pair of cospectral-class
representatives is scanned on (0, bmax] and each sign change refined. Prints
the located roots and a histogram of their positions.

    python3 scripts/crossing_survey.py --nmax 7 --prec 50
"""
import argparse
import json
import logging
import lzma
import time
from collections import Counter

import mpmath

from walkcent.exact import parse_rational
from walkcent.miner import MineStats, MineTask, mine
from walkcent.solver import BetaRoot

from mine_small import sources


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=7)
    ap.add_argument("--prec", type=int, default=50)
    ap.add_argument("--bmax", default="20")
    ap.add_argument("--step", default="1/100")
    ap.add_argument("--out", help="write findings as NDJSON here")
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    stats = MineStats()
    found = []
    t0 = time.time()
    for path in sources(args.nmax):
        opener = lzma.open if path.suffix == ".xz" else open
        with opener(path, "rt") as fh:
            task = MineTask(source=fh, predicates=("crossing-pair",), n_max=args.nmax,
                            digits=args.prec, bmax=parse_rational(args.bmax),
                            step=parse_rational(args.step))
            found += list(mine(task, stats))
    hist = Counter()
    worst = mpmath.mpf(0)
    for f in found:
        r = BetaRoot.from_json(f.witness["root"])
        hist[int(r.beta)] += 1
        worst = max(worst, r.residual)
        print(f"{f.graph6:10s} {str(f.witness['pair']):8s} beta = {f.witness['root']['beta']['value'][:24]}"
              f"  residual {f.witness['root']['residual']['value']}")
    print(f"{len(found)} crossing pairs in {len({f.graph6 for f in found})} graphs, "
          f"{stats.graphs} graphs scanned, {time.time() - t0:.1f}s")
    print("floor(beta) histogram:", dict(sorted(hist.items())))
    print("max residual:", mpmath.nstr(worst, 3))
    if args.out:
        with open(args.out, "w") as fh:
            for f in found:
                fh.write(json.dumps(f.to_json(), sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
