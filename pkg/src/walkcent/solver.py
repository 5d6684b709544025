"""Locate beta > 0 where two non-cospectral vertices have equal subgraph centrality.

The difference of the two centralities is the exponential sum

    g(beta) = sum_h (C[h][i] - C[h][j]) * exp(beta * mu_h),

scanned on a grid for sign changes and refined by bisection. Located roots
are only ever *located*; the probe against small-height rationals is a
consistency check, not a certificate of anything.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

import mpmath
from mpmath import mpf

from .errors import DegenerateDiffError, ParameterError, PrecisionError, SpuriousRootError
from .exact import ExactMatrix, cospectral, cospectral_classes, parse_rational, walk_counts
from .fmt import decimal_str, tagged
from .graph import Graph, adjacency_matrix, to_graph6
from .spectral import Precision, SpectralData, _as_precision, _to_mpf, decompose

log = logging.getLogger(__name__)

DEFAULT_BMAX = Fraction(20)
DEFAULT_STEP = Fraction(1, 100)
PROBE_MAX_DENOMINATOR = 10 ** 4


@dataclass(frozen=True)
class DiffFunction:
    eigenvalues: tuple
    deltas: tuple
    precision: Precision
    pair: tuple | None = None
    zero: bool = False

    def __call__(self, beta):
        with self.precision.workdps():
            b = _to_mpf(beta) if isinstance(beta, (Fraction, int)) else mpf(beta)
            return mpmath.fsum(d * mpmath.exp(b * mu) for d, mu in zip(self.deltas, self.eigenvalues))

    @classmethod
    def synthetic(cls, eigenvalues, deltas, prec=None):
        prec = _as_precision(prec)
        with prec.workdps():
            return cls(tuple(mpf(x) for x in eigenvalues), tuple(mpf(x) for x in deltas), prec)


def build_diff(sd: SpectralData, pair, A: ExactMatrix, walks=None) -> DiffFunction:
    """Coefficient deltas for ``pair``; exactly cospectral pairs get the ``zero`` marker."""
    i, j = pair
    if cospectral(A, (i, j), walks):
        return DiffFunction(sd.eigenvalues, tuple(mpf(0) for _ in sd.eigenvalues), sd.precision,
                            (i, j), zero=True)
    prec = sd.precision
    with prec.workdps():
        deltas = tuple(row[i] - row[j] for row in sd.C)
        eps = prec.eps_w
        if abs(mpmath.fsum(deltas)) >= eps:
            raise PrecisionError(f"deltas for pair {pair} do not sum to zero")
        if all(abs(d) < eps for d in deltas):
            raise PrecisionError(
                f"pair {pair} is not cospectral but its deltas vanish at {prec.digits} digits"
            )
    return DiffFunction(sd.eigenvalues, deltas, prec, (i, j))


@dataclass(frozen=True)
class ScanResult:
    brackets: tuple
    # grid points where |g| dips below 10^(-P/2) without a sign change
    dips: tuple = ()


def _fixed(x, bits):
    return int(mpmath.floor(x * mpf(2) ** bits))


def _grid_exponentials(eigenvalues, step: Fraction, N: int, bits: int):
    """Fixed-point ``exp(k step mu_h)`` for k = 1..N, as lists of ints scaled by 2^bits.

    Successive powers are formed by integer multiply-and-shift; the
    relative error after k steps is about k ulps.
    """
    s = _to_mpf(step)
    out = []
    for mu in eigenvalues:
        m = _fixed(mpmath.exp(s * mu), bits)
        e = m
        seq = [e]
        for _ in range(N - 1):
            e = (e * m) >> bits
            seq.append(e)
        out.append(seq)
    return out


def _scan_values(vals, step, tiny):
    """Brackets and tangential dips from grid samples ``vals[k] = g((k+1) step)``.

    Samples with ``|g| < tiny`` carry no sign: a root sitting on (or within
    rounding of) a grid point is bracketed by the nearest definite-sign
    samples on either side. A run of tiny samples between samples of equal
    sign is reported as a dip instead.
    """
    N = len(vals)
    brackets = []
    dips = []
    prev = None  # index of last definite-sign sample
    run = []  # near-zero samples since then
    for k, v in enumerate(vals):
        if abs(v) < tiny:
            run.append(k)
            continue
        if prev is not None and (vals[prev] < 0) != (v < 0):
            brackets.append(((prev + 1) * step, (k + 1) * step))
        elif run:
            dips.extend((j + 1) * step for j in run)
        prev, run = k, []
    dips.extend((j + 1) * step for j in run)
    return ScanResult(tuple(brackets), tuple(dips))


def _grid(prec, bmax, step):
    bmax = parse_rational(bmax)
    step = parse_rational(step)
    if step <= 0 or bmax <= 0:
        raise ParameterError("bmax and step must be positive")
    bits = int(prec.dps * 3.33) + 16
    return int(bmax / step), step, bits


def scan(df: DiffFunction, bmax=DEFAULT_BMAX, step=DEFAULT_STEP) -> ScanResult:
    """Sign changes of g on the grid ``k * step``, k = 1..bmax/step.

    g is sampled in fixed-point integer arithmetic carrying the working
    precision's digits after the binary point; brackets are re-checked in
    mpmath by ``refine_root``.
    """
    if df.zero:
        raise DegenerateDiffError("identically zero difference function (cospectral pair)")
    prec = df.precision
    N, step, bits = _grid(prec, bmax, step)
    with prec.workdps():
        E = _grid_exponentials(df.eigenvalues, step, N, bits)
        D = [_fixed(d, bits) for d in df.deltas]
        tiny = _fixed(mpf(10) ** (-(prec.digits // 2)), 2 * bits)
    vals = [sum(d * col[k] for d, col in zip(D, E)) for k in range(N)]
    return _scan_values(vals, step, tiny)


def scan_pairs(sd: SpectralData, pairs, bmax=DEFAULT_BMAX, step=DEFAULT_STEP) -> dict:
    """``scan`` for many vertex pairs of one graph, sharing the exponentials.

    Pairs must not be exactly cospectral (callers filter with the exact test).
    """
    prec = sd.precision
    N, step, bits = _grid(prec, bmax, step)
    verts = sorted({v for p in pairs for v in p})
    with prec.workdps():
        E = _grid_exponentials(sd.eigenvalues, step, N, bits)
        Cf = {v: [_fixed(row[v], bits) for row in sd.C] for v in verts}
        tiny = _fixed(mpf(10) ** (-(prec.digits // 2)), 2 * bits)
    S = {}
    for v in verts:
        c = Cf[v]
        S[v] = [sum(x * col[k] for x, col in zip(c, E)) for k in range(N)]
    out = {}
    for i, j in pairs:
        si, sj = S[i], S[j]
        out[(i, j)] = _scan_values([a - b for a, b in zip(si, sj)], step, tiny)
    return out


def scan_roots(df: DiffFunction, bmax=DEFAULT_BMAX, step=DEFAULT_STEP) -> list:
    """Grid brackets ``[k step, (k+1) step]`` on (0, bmax] where g changes sign."""
    return list(scan(df, bmax, step).brackets)


@dataclass(frozen=True)
class BetaRoot:
    lo: object
    hi: object
    residual: object
    digits: int
    pair: tuple | None = None
    graph: str | None = None
    working_digits: int = 0
    steps: int = 0

    @property
    def beta(self):
        with mpmath.workdps(self.digits + 20):
            return (self.lo + self.hi) / 2

    def to_json(self) -> dict:
        P = self.digits
        # endpoints widened outward so the printed bracket still contains the root
        return {
            "pair": list(self.pair) if self.pair else None,
            "graph6": self.graph,
            "digits": P,
            "lo": decimal_str(self.lo, P + 5, "floor"),
            "hi": decimal_str(self.hi, P + 5, "ceil"),
            "beta": tagged(self.beta, P),
            "residual": tagged(self.residual, 5),
            "working_digits": self.working_digits,
        }

    @classmethod
    def from_json(cls, d: dict) -> "BetaRoot":
        P = int(d["digits"])
        with mpmath.workdps(P + 20):
            return cls(
                mpf(d["lo"]), mpf(d["hi"]), mpf(d["residual"]["value"]), P,
                tuple(d["pair"]) if d.get("pair") else None, d.get("graph6"),
                int(d.get("working_digits", 0)),
            )


def refine_root(
    df: DiffFunction,
    bracket,
    prec=None,
    rebuild: Callable[[Precision], DiffFunction] | None = None,
    max_digits: int = 400,
    accelerate: bool = False,
    trace: list | None = None,
) -> BetaRoot:
    """Bisect a sign-change bracket down to width ``10^(-P+10)`` and residual ``< 10^(-P+20)``.

    If the residual cannot be pushed below the bound at the current working
    precision, ``rebuild(Precision)`` is asked for a more precise difference
    function (doubling the digits each time, up to ``max_digits``). A sign
    change that vanishes on rebuild raises ``SpuriousRootError``.

    With ``accelerate`` each halving step is preceded by an Illinois-style
    false-position step; the bracket still at least halves per iteration.
    """
    target = _as_precision(prec) if prec is not None else df.precision
    if rebuild is not None and df.precision.digits < target.digits:
        df = rebuild(target)
    P = target.digits
    with mpmath.workdps(max(df.precision.dps, target.dps)):
        width_goal = mpf(10) ** (-P + 10)
        res_goal = mpf(10) ** (-P + 20)
    lo_q, hi_q = bracket
    with df.precision.workdps():
        lo = lo_q if isinstance(lo_q, mpf) else _to_mpf(parse_rational(lo_q))
        hi = hi_q if isinstance(hi_q, mpf) else _to_mpf(parse_rational(hi_q))
    steps = 0
    while True:
        with df.precision.workdps():
            glo, ghi = df(lo), df(hi)
            if glo == 0 or ghi == 0:
                x = lo if glo == 0 else hi
                return BetaRoot(x, x, mpf(0), P, df.pair, None, df.precision.digits, steps)
            if glo * ghi > 0:
                raise SpuriousRootError(
                    f"no sign change on [{mpmath.nstr(lo, 12)}, {mpmath.nstr(hi, 12)}] "
                    f"at {df.precision.digits} digits"
                )
            floor_w = mpf(10) ** (-df.precision.dps + 5) * max(1, abs(hi))
            illinois = [glo, ghi]
            while True:
                mid = (lo + hi) / 2
                gm = df(mid)
                res = abs(gm)
                if hi - lo <= width_goal and res < res_goal:
                    return BetaRoot(lo, hi, res, P, df.pair, None, df.precision.digits, steps)
                if hi - lo <= floor_w:
                    break
                if accelerate and illinois[0] != illinois[1]:
                    x = hi - illinois[1] * (hi - lo) / (illinois[1] - illinois[0])
                    if lo < x < hi:
                        gx = df(x)
                        if gx == 0:
                            return BetaRoot(x, x, mpf(0), P, df.pair, None, df.precision.digits, steps)
                        if (gx > 0) == (glo > 0):
                            lo, glo = x, gx
                            illinois = [gx, illinois[1] / 2]
                        else:
                            hi, ghi = x, gx
                            illinois = [illinois[0] / 2, gx]
                        mid = (lo + hi) / 2
                        gm = df(mid)
                if gm == 0:
                    return BetaRoot(mid, mid, mpf(0), P, df.pair, None, df.precision.digits, steps)
                if (gm > 0) == (glo > 0):
                    lo, glo = mid, gm
                else:
                    hi, ghi = mid, gm
                illinois = [glo, ghi]
                steps += 1
                if trace is not None:
                    trace.append(hi - lo)
        # stalled: residual still above the bound at this working precision
        if rebuild is None or df.precision.digits * 2 > max_digits:
            raise PrecisionError(
                f"residual {mpmath.nstr(res, 5)} stalls above 1e{-P + 20} "
                f"at {df.precision.digits} working digits"
            )
        log.info("escalating root refinement to %d digits", df.precision.digits * 2)
        df = rebuild(df.precision.escalated(df.precision.digits * 2))


def nearest_small_rational(x, max_den: int = PROBE_MAX_DENOMINATOR):
    """Closest p/q to ``x`` with q <= max_den, by direct search over q."""
    best = None
    for q in range(1, max_den + 1):
        p = int(mpmath.nint(x * q))
        dist = abs(x - mpf(p) / q)
        if best is None or dist < best[0]:
            best = (dist, Fraction(p, q))
    return best


@dataclass
class RegularityReport:
    graph6: str | None
    digits: int
    classes: list
    pair_roots: list = field(default_factory=list)
    dips: list = field(default_factory=list)
    candidates: list = field(default_factory=list)
    spurious: list = field(default_factory=list)

    def to_json(self) -> dict:
        P = self.digits
        return {
            "graph6": self.graph6,
            "digits": P,
            "cospectral_classes": self.classes,
            "pairs": [
                {"pair": list(p), "roots": [r.to_json() for r in roots]} for p, roots in self.pair_roots
            ],
            "tangential_dips": [{"pair": list(p), "beta": str(b)} for p, b in self.dips],
            "spurious": [{"pair": list(p), "bracket": [str(a), str(b)]} for p, (a, b) in self.spurious],
            "candidates": self.candidates,
        }


def crossing_roots(A: ExactMatrix, pair, sd: SpectralData, bmax=DEFAULT_BMAX, step=DEFAULT_STEP,
                   prec=None, walks=None):
    """Refined roots of one pair's difference function on (0, bmax]; ``(roots, dips, spurious)``."""
    prec = _as_precision(prec) if prec is not None else sd.precision
    df = build_diff(sd, pair, A, walks)
    if df.zero:
        raise DegenerateDiffError(f"pair {pair} is cospectral")
    res = scan(df, bmax, step)

    def rebuild(p):
        return build_diff(decompose(A, p, with_perron=False), pair, A, walks)

    roots, spurious = [], []
    for br in res.brackets:
        try:
            roots.append(refine_root(df, br, prec, rebuild=rebuild))
        except SpuriousRootError:
            spurious.append(br)
    return roots, res.dips, spurious


def regularity_beta_search(g: Graph, prec=None, bmax=DEFAULT_BMAX, step=DEFAULT_STEP,
                           sd: SpectralData | None = None) -> RegularityReport:
    """Hunt for beta at which every vertex has the same subgraph centrality.

    Cospectral vertices always agree, so only one representative per exact
    cospectral class is compared. A candidate is a root of the first
    representative pair at which every other representative difference is
    below ``10^(-P+20)``; each candidate is then probed against all p/q with
    q <= 10^4.
    """
    prec = _as_precision(prec)
    if g.directed:
        raise ParameterError("regularity search needs an undirected graph")
    A = adjacency_matrix(g)
    walks = walk_counts(A, max(g.n - 1, 1))
    classes = cospectral_classes(A, walks)
    if len(classes) == 1:
        raise ParameterError("graph is walk-regular; every beta makes it subgraph regular")
    try:
        g6 = to_graph6(g)
    except ParameterError:
        g6 = None
    if sd is None or sd.precision.digits < prec.digits:
        sd = decompose(A, prec, with_perron=False)
    reps = [c[0] for c in classes]
    report = RegularityReport(g6, prec.digits, [list(c) for c in classes])
    for pair in combinations(reps, 2):
        roots, dips, spurious = crossing_roots(A, pair, sd, bmax, step, prec, walks)
        roots = [BetaRoot(r.lo, r.hi, r.residual, r.digits, r.pair, g6, r.working_digits, r.steps)
                 for r in roots]
        report.pair_roots.append((pair, roots))
        report.dips.extend((pair, b) for b in dips)
        report.spurious.extend((pair, b) for b in spurious)
    first_pair, first_roots = report.pair_roots[0]
    with prec.workdps():
        bound = mpf(10) ** (-prec.digits + 20)
        diffs = [build_diff(sd, p, A, walks) for p, _ in report.pair_roots[1:]]
        for root in first_roots:
            b = root.beta
            worst = max((abs(df(b)) for df in diffs), default=mpf(0))
            if worst < bound:
                dist, rat = nearest_small_rational(b)
                report.candidates.append({
                    "beta": tagged(b, prec.digits),
                    "max_residual": tagged(max(worst, root.residual), 5),
                    "nearest_rational": str(rat),
                    "distance": tagged(dist, 5),
                    "probe_passed": bool(dist > bound),
                })
    return report
