"""Batch predicates over graph6 streams.

Each input line is one graph. Cheap exact filters run first (degree
multiset, integer walk signatures); the spectral predicates only see
graphs that survive them. Work is split into chunks of lines and the
results are merged in input order, so the output never depends on the
worker count.
"""
from __future__ import annotations

import json
import logging
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, islice

import mpmath
import numpy as np

from .errors import GraphFormatError, PrecisionError, SpuriousRootError, WalkcentError
from .exact import cospectral, cospectral_classes, walk_counts
from .graph import Graph, adjacency_matrix, automorphism_maps, parse_graph6
from .solver import (
    DEFAULT_BMAX,
    DEFAULT_STEP,
    BetaRoot,
    build_diff,
    refine_root,
    regularity_beta_search,
    scan_pairs,
)
from .spectral import Precision, decompose

log = logging.getLogger(__name__)

PREDICATES = ("cospectral-nonauto", "walk-regular", "crossing-pair", "regularity-candidate")


@dataclass(frozen=True)
class MineTask:
    source: object
    predicates: tuple = ("cospectral-nonauto",)
    n_min: int = 1
    n_max: int = 62
    digits: int = 50
    workers: int = 1
    filters: bool = True
    bmax: object = DEFAULT_BMAX
    step: object = DEFAULT_STEP
    chunk_size: int = 256

    def __post_init__(self):
        if not self.predicates:
            raise ValueError("at least one predicate is required")
        bad = [p for p in self.predicates if p not in PREDICATES]
        if bad:
            raise ValueError(f"unknown predicate(s): {', '.join(bad)}")
        if not 1 <= self.n_min <= self.n_max <= 62:
            raise ValueError("n range must lie within 1..62")
        Precision(self.digits)


@dataclass(frozen=True)
class Finding:
    graph6: str
    predicate: str
    witness: dict
    line: int = 0

    def to_json(self) -> dict:
        return {"line": self.line, "graph6": self.graph6, "predicate": self.predicate,
                "witness": self.witness}

    @classmethod
    def from_json(cls, d: dict) -> "Finding":
        return cls(d["graph6"], d["predicate"], d["witness"], d.get("line", 0))


@dataclass
class MineStats:
    graphs: int = 0
    skipped: int = 0
    malformed: int = 0
    filtered: Counter = field(default_factory=Counter)
    findings: Counter = field(default_factory=Counter)
    graphs_matched: Counter = field(default_factory=Counter)

    def to_json(self) -> dict:
        return {
            "graphs": self.graphs,
            "skipped_out_of_range": self.skipped,
            "malformed": self.malformed,
            "filtered": dict(sorted(self.filtered.items())),
            "findings": dict(sorted(self.findings.items())),
            "graphs_matched": dict(sorted(self.graphs_matched.items())),
        }


def int_walk_signatures(g: Graph):
    """Per-vertex ``([A^r]_ii for r = 1..n-1)`` as Python ints.

    int64 numpy products are used while (max degree)^(n-1) stays far from
    overflow; otherwise exact Python integers.
    """
    n = g.n
    R = max(n - 1, 1)
    maxdeg = max(g.degrees(), default=0)
    A = np.zeros((n, n), dtype=np.int64)
    for u, v, _ in g.edges:
        A[u, v] = A[v, u] = 1
    if maxdeg ** R < 2 ** 62:
        P = A.copy()
        diags = [np.diagonal(P).copy()]
        for _ in range(R - 1):
            P = P @ A
            diags.append(np.diagonal(P).copy())
        D = np.array(diags).T.tolist()
    else:
        w = walk_counts(adjacency_matrix(g), R)
        D = [[int(x) for x in row] for row in w.table]
    return [tuple(row) for row in D]


def _classes(sigs):
    groups = {}
    for v, s in enumerate(sigs):
        groups.setdefault(s, []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def _pred_cospectral_nonauto(g, g6, task, sigs, classes):
    out = []
    for cls in classes:
        for i, j in combinations(cls, 2):
            if not automorphism_maps(g, (i, j)):
                out.append({"pair": [i, j], "walks": [str(x) for x in sigs[i]]})
    return out


def _pred_walk_regular(g, g6, task, sigs, classes):
    if len(classes) == 1:
        return [{"walks": [str(x) for x in sigs[0]]}]
    return []


def _crossings(g, task, classes, digits):
    A = adjacency_matrix(g)
    prec = Precision(digits)
    sd = decompose(A, prec, with_perron=False)
    reps = [c[0] for c in classes]
    pairs = list(combinations(reps, 2))
    scans = scan_pairs(sd, pairs, task.bmax, task.step)
    found = []
    for pair in pairs:
        for br in scans[pair].brackets:
            df = build_diff(sd, pair, A)

            def rebuild(p, pair=pair):
                return build_diff(decompose(A, p, with_perron=False), pair, A)

            try:
                root = refine_root(df, br, prec, rebuild=rebuild)
            except SpuriousRootError:
                log.info("spurious bracket %s for pair %s", br, pair)
                continue
            found.append((pair, root))
    return found


def _pred_crossing(g, g6, task, sigs, classes):
    if len(classes) < 2:
        return []
    out = []
    for pair, root in _crossings(g, task, classes, task.digits):
        root = BetaRoot(root.lo, root.hi, root.residual, root.digits, pair, g6, root.working_digits)
        out.append({"pair": list(pair), "root": root.to_json()})
    return out


def _pred_regularity(g, g6, task, sigs, classes):
    if len(classes) < 2:
        return []
    rep = regularity_beta_search(g, Precision(task.digits), task.bmax, task.step)
    return [{"candidate": c, "classes": rep.classes} for c in rep.candidates]


_PRED_FUNCS = {
    "cospectral-nonauto": _pred_cospectral_nonauto,
    "walk-regular": _pred_walk_regular,
    "crossing-pair": _pred_crossing,
    "regularity-candidate": _pred_regularity,
}


def _cheap_reject(pred, g, classes, degrees):
    """True if the predicate provably cannot match; never rejects a real match."""
    if pred == "cospectral-nonauto":
        if len(set(degrees)) == len(degrees):
            return True
        return all(len(c) == 1 for c in classes)
    if pred == "walk-regular":
        return len(set(degrees)) != 1 or len(classes) != 1
    # the beta predicates need at least two non-cospectral vertices
    return len(classes) < 2


def process_graph(lineno: int, line: str, task: MineTask):
    """Findings for one graph6 line; raises GraphFormatError on malformed input."""
    g6 = line.strip()
    g = parse_graph6(g6)
    if not task.n_min <= g.n <= task.n_max:
        return None, []
    degrees = g.degrees()
    sigs = int_walk_signatures(g)
    classes = _classes(sigs)
    findings = []
    filtered = []
    for pred in task.predicates:
        if task.filters and _cheap_reject(pred, g, classes, degrees):
            filtered.append(pred)
            continue
        for w in _PRED_FUNCS[pred](g, g6, task, sigs, classes):
            findings.append(Finding(g6, pred, w, lineno))
    return filtered, findings


def _process_chunk(args):
    chunk, task = args
    out = []
    for lineno, line in chunk:
        try:
            filtered, findings = process_graph(lineno, line, task)
            out.append((lineno, "ok", filtered, findings))
        except GraphFormatError as exc:
            out.append((lineno, "malformed", str(exc), []))
        except (WalkcentError, ArithmeticError) as exc:
            out.append((lineno, "error", f"{type(exc).__name__}: {exc}", []))
    return out


def _numbered_lines(source):
    if isinstance(source, str):
        fh = sys.stdin if source == "-" else open(source)
        close = source != "-"
    else:
        fh, close = source, False
    try:
        for lineno, line in enumerate(fh, start=1):
            if isinstance(line, bytes):
                line = line.decode("ascii", errors="replace")
            if not line.strip():
                continue
            yield lineno, line
    finally:
        if close:
            fh.close()


def _chunks(it, size):
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield chunk


def mine(task: MineTask, stats: MineStats | None = None):
    """Yield findings in input order; ``stats`` (if given) is filled as the stream is consumed."""
    if stats is None:
        stats = MineStats()
    chunks = ((c, task) for c in _chunks(_numbered_lines(task.source), task.chunk_size))
    if task.workers > 1:
        pool = ProcessPoolExecutor(max_workers=task.workers)
        results = pool.map(_process_chunk, chunks)
    else:
        pool = None
        results = map(_process_chunk, chunks)
    try:
        for chunk_out in results:
            for lineno, status, info, findings in chunk_out:
                if status == "malformed":
                    stats.malformed += 1
                    log.warning("line %d: malformed graph6 (%s); skipped", lineno, info)
                    continue
                if status == "error":
                    stats.malformed += 1
                    log.warning("line %d: %s; skipped", lineno, info)
                    continue
                if info is None:
                    stats.skipped += 1
                    continue
                stats.graphs += 1
                stats.filtered.update(info)
                preds = set()
                for f in findings:
                    stats.findings[f.predicate] += 1
                    preds.add(f.predicate)
                    yield f
                stats.graphs_matched.update(preds)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


def verify_finding(f: Finding) -> bool:
    """Recompute the predicate for ``f.graph6`` from scratch and compare with the witness."""
    try:
        g = parse_graph6(f.graph6)
        w = f.witness
        if f.predicate == "cospectral-nonauto":
            i, j = w["pair"]
            A = adjacency_matrix(g)
            walks = walk_counts(A, max(g.n - 1, 1))
            if not cospectral(A, (i, j), walks):
                return False
            if [str(x) for x in walks[i]] != list(w["walks"]):
                return False
            return not automorphism_maps(g, (i, j))
        if f.predicate == "walk-regular":
            A = adjacency_matrix(g)
            walks = walk_counts(A, max(g.n - 1, 1))
            return all(walks[v] == walks[0] for v in range(g.n)) and \
                [str(x) for x in walks[0]] == list(w["walks"])
        if f.predicate == "crossing-pair":
            return _verify_root(g, w)
        if f.predicate == "regularity-candidate":
            return _verify_candidate(g, w)
    except (WalkcentError, KeyError, TypeError, ValueError, ArithmeticError):
        return False
    return False


def _verify_root(g, w):
    root = BetaRoot.from_json(w["root"])
    pair = tuple(w["pair"])
    if root.pair is not None and tuple(root.pair) != pair:
        return False
    A = adjacency_matrix(g)
    if cospectral(A, pair):
        return False
    P = root.digits
    sd = decompose(A, Precision(max(P, root.working_digits)), with_perron=False)
    df = build_diff(sd, pair, A)
    with sd.precision.workdps():
        if root.hi - root.lo >= mpmath.mpf(10) ** (-P + 10):
            return False
        glo, ghi = df(root.lo), df(root.hi)
        if glo * ghi > 0:
            return False
        return abs(df(root.beta)) < mpmath.mpf(10) ** (-P + 20)


def _verify_candidate(g, w):
    cand = w["candidate"]
    P = int(cand["beta"]["digits"])
    A = adjacency_matrix(g)
    walks = walk_counts(A, max(g.n - 1, 1))

    classes = cospectral_classes(A, walks)
    if [list(c) for c in classes] != w["classes"]:
        return False
    sd = decompose(A, Precision(P), with_perron=False)
    reps = [c[0] for c in classes]
    with sd.precision.workdps():
        b = mpmath.mpf(cand["beta"]["value"])
        bound = mpmath.mpf(10) ** (-P + 20)
        return all(abs(build_diff(sd, (reps[0], r), A, walks)(b)) < bound for r in reps[1:])


def write_findings(findings, fh):
    for f in findings:
        fh.write(json.dumps(f.to_json(), sort_keys=True) + "\n")
