"""Run the miner over the bundled connected-graph corpora and print per-order counts.

    python3 scripts/mine_small.py --predicate cospectral-nonauto --nmax 9
"""
import argparse
import json
import lzma
import logging
import time
from collections import Counter
from pathlib import Path

from walkcent.miner import PREDICATES, MineStats, MineTask, mine, verify_finding

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def sources(n_max):
    yield DATA / "connected_n1-7.g6"
    for n in (8, 9):
        if n <= n_max:
            yield DATA / f"connected_n{n}.g6.xz"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--predicate", action="append", choices=PREDICATES)
    ap.add_argument("--nmax", type=int, default=8)
    ap.add_argument("--prec", type=int, default=50)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--verify", action="store_true", help="re-check every finding from scratch")
    ap.add_argument("--out", help="write findings as NDJSON here")
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    preds = tuple(args.predicate or ("cospectral-nonauto", "walk-regular"))
    stats = MineStats()
    by_order = Counter()
    findings = []
    t0 = time.time()
    for path in sources(args.nmax):
        opener = lzma.open if path.suffix == ".xz" else open
        with opener(path, "rt") as fh:
            task = MineTask(source=fh, predicates=preds, n_max=args.nmax, digits=args.prec,
                            workers=args.workers)
            for f in mine(task, stats):
                findings.append(f)
                by_order[(ord(f.graph6[0]) - 63, f.predicate)] += 1
    elapsed = time.time() - t0

    for (n, pred), k in sorted(by_order.items()):
        print(f"n={n:2d}  {pred:22s} {k:6d}")
    print(json.dumps(stats.to_json(), sort_keys=True))
    print(f"{len(findings)} findings in {elapsed:.1f}s")
    if args.verify:
        ok = sum(verify_finding(f) for f in findings)
        print(f"verified {ok}/{len(findings)}")
    if args.out:
        with open(args.out, "w") as fh:
            for f in findings:
                fh.write(json.dumps(f.to_json(), sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
