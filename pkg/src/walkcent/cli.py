"""Command-line front end.

Exit status: 0 on success, 2 on bad input or arguments, 3 when precision
escalation is exhausted.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

import mpmath

from . import __version__
from .centrality import (
    degree_report,
    eigenvector_centrality,
    entropy_json,
    resolvent_centrality,
    subgraph_centrality_spectral,
    subgraph_centrality_taylor,
    walk_entropy,
)
from .errors import PrecisionError, WalkcentError
from .exact import char_poly, cospectral, cospectral_classes, parse_rational, walk_counts, walk_regular
from .fmt import decimal_str, tagged
from .graph import adjacency_matrix, parse_edge_list, parse_graph6, to_graph6
from .miner import PREDICATES, MineStats, MineTask, mine
from .solver import crossing_roots, regularity_beta_search
from .spectral import Precision, decompose, is_connected_matrix

SCHEMA = "walkcent/1"
EXIT_OK, EXIT_INPUT, EXIT_PRECISION = 0, 2, 3

log = logging.getLogger("walkcent")


class UsageError(Exception):
    pass


def _read_input(args) -> str:
    if args.input in (None, "-"):
        return sys.stdin.read()
    try:
        with open(args.input) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from exc


def load_graph(args):
    text = _read_input(args)
    if args.format == "g6":
        lines = [l for l in text.splitlines() if l.strip()]
        if len(lines) != 1:
            raise UsageError(f"expected exactly one graph6 line, got {len(lines)}")
        return parse_graph6(lines[0])
    return parse_edge_list(text)


def _prec(args) -> Precision:
    return Precision(args.prec)


def _graph_header(g):
    out = {"n": g.n, "directed": g.directed, "edges": len(g.edges)}
    try:
        out["graph6"] = to_graph6(g)
    except WalkcentError:
        pass
    return out


def _pair(text):
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"pair must look like 'i,j', got {text!r}") from None
    return i, j


def _beta(text):
    b = parse_rational(text)
    if b == 0:
        raise argparse.ArgumentTypeError("beta must be nonzero")
    return b


def _rational(text):
    return parse_rational(text)


def _prec_arg(text):
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"precision must be an integer, got {text!r}") from None
    if p < 30:
        raise argparse.ArgumentTypeError("precision must be >= 30")
    return p


# ---------------------------------------------------------------- commands


def cmd_cospectral(args):
    g = load_graph(args)
    A = adjacency_matrix(g)
    walks = walk_counts(A, max(g.n - 1, 1))
    out = {"graph": _graph_header(g), "classes": cospectral_classes(A, walks)}
    if args.pair:
        out["pair"] = list(args.pair)
        out["cospectral"] = cospectral(A, args.pair, walks)
    return out


def cmd_walkreg(args):
    g = load_graph(args)
    A = adjacency_matrix(g)
    return {"graph": _graph_header(g), "walk_regular": walk_regular(A)}


def _subgraph(A, beta, prec, backend):
    if backend == "auto":
        backend = "spectral" if A.is_symmetric() else "taylor"
    if backend == "spectral":
        return subgraph_centrality_spectral(decompose(A, prec, with_perron=False), beta, prec)
    return subgraph_centrality_taylor(A, beta, prec)


def cmd_centrality(args):
    g = load_graph(args)
    A = adjacency_matrix(g)
    prec = _prec(args)
    if args.fn == "subgraph":
        rep = _subgraph(A, args.beta, prec, args.backend)
    elif args.fn == "resolvent":
        if args.alpha is None:
            raise UsageError("--alpha is required for the resolvent centrality")
        rep = resolvent_centrality(A, args.alpha, prec)
    elif args.fn == "degree":
        rep = degree_report(A, prec)
    else:
        rep = eigenvector_centrality(A, prec)
    if args.output == "csv":
        return rep.to_csv()
    if args.output == "table":
        lines = [f"# {rep.function} ({rep.backend}), {prec.digits} digits"]
        idx = rep.class_index()
        for i, v in enumerate(rep.values):
            lines.append(f"{i}\t{decimal_str(v, prec.digits)}\tclass {idx[i]}")
        return "\n".join(lines) + "\n"
    return {"graph": _graph_header(g), "report": rep.to_json()}


def cmd_entropy(args):
    g = load_graph(args)
    A = adjacency_matrix(g)
    prec = _prec(args)
    rep = _subgraph(A, args.beta, prec, args.backend)
    S, p = walk_entropy(rep, prec)
    return {"graph": _graph_header(g), **entropy_json(S, p, rep, g.n)}


def cmd_solve_beta(args):
    g = load_graph(args)
    prec = _prec(args)
    if args.pair:
        A = adjacency_matrix(g)
        sd = decompose(A, prec, with_perron=False)
        roots, dips, spurious = crossing_roots(A, args.pair, sd, args.bmax, args.step, prec)
        return {
            "graph": _graph_header(g),
            "pair": list(args.pair),
            "roots": [r.to_json() for r in roots],
            "tangential_dips": [str(b) for b in dips],
            "spurious": [[str(a), str(b)] for a, b in spurious],
        }
    rep = regularity_beta_search(g, prec, args.bmax, args.step)
    return {"graph": _graph_header(g), **rep.to_json()}


def cmd_analyze(args):
    g = load_graph(args)
    A = adjacency_matrix(g)
    prec = _prec(args)
    P = prec.digits
    R = max(g.n - 1, 1)
    walks = walk_counts(A, R)
    classes = cospectral_classes(A, walks)
    out = {
        "graph": _graph_header(g),
        "walks": walks.to_json(),
        "char_poly": char_poly(A).to_json(),
        "cospectral_classes": classes,
        "walk_regular": len(classes) == 1,
        "beta": str(args.beta),
    }
    taylor = subgraph_centrality_taylor(A, args.beta, prec)
    out["subgraph_taylor"] = taylor.to_json()
    S, p = walk_entropy(taylor, prec)
    out["entropy"] = entropy_json(S, p, taylor, g.n)
    if A.is_symmetric():
        sd = decompose(A, prec)
        out["spectral"] = sd.to_json()
        via_sd = subgraph_centrality_spectral(sd, args.beta, prec)
        out["subgraph_spectral"] = via_sd.to_json()
        with prec.workdps():
            gap = max(abs(a - b) for a, b in zip(taylor.values, via_sd.values))
        out["backend_gap"] = tagged(gap, 5)
        out["degree"] = [str(x) for x in degree_report(A, prec).exact]
        if sd.perron is not None:
            out["eigenvector"] = [tagged(x, P) for x in sd.perron]
        if len(classes) > 1:
            reps = [c[0] for c in classes]
            scans = []
            for a in range(len(reps)):
                for b in range(a + 1, len(reps)):
                    roots, dips, _ = crossing_roots(A, (reps[a], reps[b]), sd, args.bmax, args.step,
                                                    prec, walks)
                    rj = [dict(r.to_json(), graph6=out["graph"].get("graph6")) for r in roots]
                    scans.append({"pair": [reps[a], reps[b]], "roots": rj,
                                  "tangential_dips": [str(x) for x in dips]})
            out["crossings"] = scans
    return out


def cmd_mine(args):
    source = args.input if args.input not in (None, "-") else sys.stdin
    task = MineTask(
        source=source,
        predicates=tuple(args.predicate or ("cospectral-nonauto",)),
        n_min=args.nmin,
        n_max=args.nmax,
        digits=args.prec,
        workers=args.workers,
        filters=not args.no_filters,
        bmax=args.bmax,
        step=args.step,
    )
    stats = MineStats()
    out = sys.stdout
    for f in mine(task, stats):
        out.write(json.dumps(f.to_json(), sort_keys=True) + "\n")
    summary = {"schema": SCHEMA, "summary": stats.to_json()}
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    else:
        # last line of the stream; findings never carry a "summary" key
        out.write(json.dumps(summary, sort_keys=True) + "\n")
    return None if stats.malformed == 0 else EXIT_INPUT


COMMANDS = {
    "analyze": cmd_analyze,
    "cospectral": cmd_cospectral,
    "walkreg": cmd_walkreg,
    "centrality": cmd_centrality,
    "entropy": cmd_entropy,
    "solve-beta": cmd_solve_beta,
    "mine": cmd_mine,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help="input file (default: standard input)")
    common.add_argument("--format", choices=("edgelist", "g6"), default="edgelist")
    common.add_argument("--prec", type=_prec_arg, default=50, help="decimal digits (>= 30)")
    common.add_argument("--output", choices=("json", "csv", "table"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    beta = argparse.ArgumentParser(add_help=False)
    beta.add_argument("--beta", type=_beta, default=Fraction(1), help="nonzero rational, e.g. 1/2")
    beta.add_argument("--backend", choices=("auto", "taylor", "spectral"), default="auto")

    scan = argparse.ArgumentParser(add_help=False)
    scan.add_argument("--bmax", type=_rational, default=Fraction(20))
    scan.add_argument("--step", type=_rational, default=Fraction(1, 100))

    p = argparse.ArgumentParser(prog="walkcent", description="Walk-based vertex centralities and cospectrality.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common, beta, scan], help="full pipeline on one graph")
    c = sub.add_parser("cospectral", parents=[common], help="exact cospectral vertex classes")
    c.add_argument("--pair", type=_pair)
    sub.add_parser("walkreg", parents=[common], help="exact walk-regularity test")
    c = sub.add_parser("centrality", parents=[common, beta], help="one diagonal entry function")
    c.add_argument("--fn", choices=("subgraph", "resolvent", "degree", "eigenvector"), default="subgraph")
    c.add_argument("--alpha", type=_rational)
    sub.add_parser("entropy", parents=[common, beta], help="walk entropy at beta")
    c = sub.add_parser("solve-beta", parents=[common, scan], help="equalizing beta values")
    c.add_argument("--pair", type=_pair)
    c = sub.add_parser("mine", parents=[common, scan], help="batch predicates over a graph6 stream")
    c.add_argument("--predicate", action="append", choices=PREDICATES)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--nmin", type=int, default=1)
    c.add_argument("--nmax", type=int, default=62)
    c.add_argument("--no-filters", action="store_true")
    c.add_argument("--summary", help="write the summary JSON here instead of as the last output line")
    return p


def _emit(result, args):
    if result is None:
        return
    if isinstance(result, str):
        sys.stdout.write(result)
        return
    if args.output == "csv":
        raise UsageError("csv output is only available for 'centrality'")
    if args.output == "table":
        sys.stdout.write(_table(result))
        return
    sys.stdout.write(json.dumps({"schema": SCHEMA, "command": args.command, **result},
                                sort_keys=True, indent=2) + "\n")


def _table(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        if set(obj) == {"value", "digits"}:
            return f"{pad}{obj['value']}\n"
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:\n" + _table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}\n")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict) and set(v) == {"value", "digits"}:
                lines.append(f"{pad}{v['value']}\n")
            elif isinstance(v, (dict, list)):
                lines.append(_table(v, indent + 1))
            else:
                lines.append(f"{pad}{v}\n")
    else:
        lines.append(f"{pad}{obj}\n")
    return "".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        status = COMMANDS[args.command](args)
        if args.command == "mine":
            return status or EXIT_OK
        _emit(status, args)
    except PrecisionError as exc:
        print(f"walkcent: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (UsageError, WalkcentError, ValueError) as exc:
        print(f"walkcent: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
