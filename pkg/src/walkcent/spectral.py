"""High-precision real spectral data for symmetric rational matrices.

Eigenvalues come from the exact characteristic polynomial: Yun square-free
factorization fixes multiplicities exactly, Sturm chains isolate each
distinct root, bisection refines it. The weight ``C[h][i]`` of eigenvalue
``mu_h`` at vertex ``i`` is the diagonal of the spectral projector

    P_h = prod_{l != h} (A - mu_l I) / (mu_h - mu_l),

so no eigenvectors are ever orthogonalized.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpf

from . import poly
from .errors import (
    ClusterCollisionError,
    DisconnectedGraphError,
    NonRealSpectrumError,
    ParameterError,
    PrecisionError,
)
from .exact import CharPoly, ExactMatrix, char_poly
from .fmt import decimal_str

DEFAULT_DIGITS = 50


@dataclass(frozen=True)
class Precision:
    """``digits`` reported decimal digits; arithmetic runs ``guard`` digits deeper."""

    digits: int = DEFAULT_DIGITS
    guard: int = 20

    def __post_init__(self):
        if not isinstance(self.digits, int) or self.digits < 30:
            raise ParameterError(f"precision must be an integer >= 30, got {self.digits!r}")

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    @property
    def eps_w(self):
        with mpmath.workdps(self.dps):
            return mpf(10) ** (-self.digits + 10)

    @property
    def eps_class(self):
        with mpmath.workdps(self.dps):
            return mpf(10) ** (-self.digits + 15)

    def workdps(self):
        return mpmath.workdps(self.dps)

    def escalated(self, digits: int) -> "Precision":
        return Precision(digits, self.guard)


def _as_precision(prec) -> Precision:
    if prec is None:
        return Precision()
    if isinstance(prec, int):
        return Precision(prec)
    return prec


def _to_mpf(q: Fraction):
    return mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class SpectralData:
    """Distinct eigenvalues (descending), multiplicities and projector diagonals.

    ``C[h][i]`` is the weight of ``eigenvalues[h]`` at vertex ``i``.
    ``perron`` is the positive unit Perron vector, or None when the
    graph is disconnected.
    """

    n: int
    eigenvalues: tuple
    intervals: tuple
    multiplicities: tuple
    C: tuple
    precision: Precision
    perron: tuple | None = None

    @property
    def d(self) -> int:
        return len(self.eigenvalues)

    def column(self, i):
        return tuple(row[i] for row in self.C)

    def moment(self, i, r):
        with self.precision.workdps():
            return mpmath.fsum(c[i] * mu ** r for c, mu in zip(self.C, self.eigenvalues))

    def to_json(self) -> dict:
        P = self.precision.digits
        out = {
            "digits": P,
            "n": self.n,
            "eigenvalues": [decimal_str(mu, P) for mu in self.eigenvalues],
            "intervals": [[str(lo), str(hi)] for lo, hi in self.intervals],
            "multiplicities": list(self.multiplicities),
            "C": [[decimal_str(c, P) for c in row] for row in self.C],
        }
        if self.perron is not None:
            out["perron"] = [decimal_str(x, P) for x in self.perron]
        return out


def isolate_eigenvalues(cp: CharPoly, prec=None):
    """``[((lo, hi), multiplicity)]`` for the distinct roots of ``cp``, largest first.

    Every interval brackets its root with ``hi - lo <= 10**-(digits + 10)``;
    an exactly located rational root has ``lo == hi``.
    """
    prec = _as_precision(prec)
    width = Fraction(1, 10 ** (prec.digits + 10))
    found = []
    for f, k in poly.squarefree_decomposition(list(cp.coeffs)):
        if poly.degree(f) == 1:
            x = -f[1] / f[0]
            found.append(((x, x), k))
            continue
        intervals, chain = poly.isolate_real_roots(f)
        if len(intervals) != poly.degree(f):
            raise NonRealSpectrumError(
                f"factor of degree {poly.degree(f)} has only {len(intervals)} real roots; "
                "is the matrix symmetric?"
            )
        ints = chain[0]
        for lo, hi in intervals:
            found.append((poly.refine_root(ints, lo, hi, width), k))
    found.sort(key=lambda t: t[0], reverse=True)
    for (a, _), (b, _) in zip(found, found[1:]):
        # b brackets the next-smaller root; roots lie strictly inside non-degenerate intervals
        if b[1] > a[0] or a == b:
            raise ClusterCollisionError("isolating intervals overlap; raise the precision")
    if sum(k for _, k in found) != cp.degree:
        raise NonRealSpectrumError("multiplicities do not add up to the matrix size")
    return found


def _midpoint(iv):
    lo, hi = iv
    return _to_mpf((lo + hi) / 2)


def _sparse_columns(A: ExactMatrix):
    cols = []
    for j in range(A.n):
        col = []
        for k in range(A.n):
            a = A.num[k][j]
            if a:
                col.append((k, _to_mpf(Fraction(a, A.den))))
        cols.append(col)
    return cols


def spectral_projector(A: ExactMatrix, eigenvalues, h: int):
    """Full projector matrix for ``eigenvalues[h]`` at the current mpmath precision."""
    n = A.n
    cols = _sparse_columns(A)
    mu_h = eigenvalues[h]
    M = [[mpf(int(i == j)) for j in range(n)] for i in range(n)]
    for l, mu_l in enumerate(eigenvalues):
        if l == h:
            continue
        s = 1 / (mu_h - mu_l)
        M = [
            [(mpmath.fsum(row[k] * a for k, a in cols[j]) - mu_l * row[j]) * s for j in range(n)]
            for row in M
        ]
    return M


def _projector_diagonals(A: ExactMatrix, eigenvalues, cols):
    n = A.n
    d = len(eigenvalues)
    out = []
    for h in range(d):
        others = [l for l in range(d) if l != h]
        if not others:
            out.append([mpf(1)] * n)
            continue
        mu_h = eigenvalues[h]
        M = [[mpf(int(i == j)) for j in range(n)] for i in range(n)]
        for l in others[:-1]:
            mu_l = eigenvalues[l]
            s = 1 / (mu_h - mu_l)
            M = [
                [(mpmath.fsum(row[k] * a for k, a in cols[j]) - mu_l * row[j]) * s for j in range(n)]
                for row in M
            ]
        # only the diagonal of the last factor is needed
        mu_l = eigenvalues[others[-1]]
        s = 1 / (mu_h - mu_l)
        out.append(
            [(mpmath.fsum(M[i][k] * a for k, a in cols[i]) - mu_l * M[i][i]) * s for i in range(n)]
        )
    return out


def coefficients(A: ExactMatrix, eigs, prec=None) -> SpectralData:
    """Projector diagonals ``C[h][i]`` for isolated eigenvalues ``eigs`` (from ``isolate_eigenvalues``)."""
    prec = _as_precision(prec)
    if not A.is_symmetric():
        raise ParameterError("spectral decomposition requires a symmetric matrix")
    with prec.workdps():
        mus = [_midpoint(iv) for iv, _ in eigs]
        eps_w = prec.eps_w
        for a, b in zip(mus, mus[1:]):
            if a - b < 10 * eps_w:
                raise ClusterCollisionError(
                    f"eigenvalues {mpmath.nstr(a, 15)} and {mpmath.nstr(b, 15)} closer than 10*eps_w"
                )
        C = _projector_diagonals(A, mus, _sparse_columns(A))
        for i in range(A.n):
            if abs(mpmath.fsum(row[i] for row in C) - 1) >= eps_w:
                raise PrecisionError(f"projector weights at vertex {i} do not sum to 1")
    return SpectralData(
        n=A.n,
        eigenvalues=tuple(mus),
        intervals=tuple(iv for iv, _ in eigs),
        multiplicities=tuple(k for _, k in eigs),
        C=tuple(tuple(row) for row in C),
        precision=prec,
    )


def is_connected_matrix(A: ExactMatrix) -> bool:
    n = A.n
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in range(n):
            if (A.num[u][v] or A.num[v][u]) and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


def perron_vector(A: ExactMatrix, prec=None, sd: SpectralData | None = None):
    """Unit Perron eigenvector (eigenvector centralities) by shifted inverse iteration."""
    prec = _as_precision(prec)
    if not A.is_symmetric():
        raise ParameterError("perron_vector requires a symmetric matrix")
    if not is_connected_matrix(A):
        raise DisconnectedGraphError("graph is disconnected; the top eigenvalue need not be simple")
    if any(x < 0 for r in A.num for x in r):
        raise ParameterError("Perron vector needs nonnegative weights")
    n = A.n
    if sd is not None and sd.precision.digits >= prec.digits:
        iv = sd.intervals[0]
        mult = sd.multiplicities[0]
    else:
        (iv, mult) = isolate_eigenvalues(char_poly(A), prec)[0]
    if mult != 1:
        raise PrecisionError("top eigenvalue of a connected graph must be simple")
    if n == 1:
        return (mpf(1),)
    with prec.workdps():
        mu1 = _midpoint(iv)
        sigma = mu1 + mpf(10) ** (-(prec.dps // 2))
        B = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                B[i, j] = _to_mpf(Fraction(A.num[i][j], A.den))
            B[i, i] -= sigma
        x = mpmath.matrix([mpf(1)] * n)
        for _ in range(5):
            x = mpmath.lu_solve(B, x)
            x = x / mpmath.norm(x)
        if mpmath.fsum(x) < 0:
            x = -x
        out = tuple(x[i] for i in range(n))
        if min(out) <= 0:
            raise PrecisionError("inverse iteration did not produce a positive vector")
    return out


def decompose(A: ExactMatrix, prec=None, with_perron: bool = True) -> SpectralData:
    """Eigenvalues, multiplicities, projector diagonals and (when connected) the Perron vector."""
    prec = _as_precision(prec)
    if not A.is_symmetric():
        raise ParameterError("spectral decomposition requires a symmetric matrix")
    eigs = isolate_eigenvalues(char_poly(A), prec)
    sd = coefficients(A, eigs, prec)
    if with_perron and is_connected_matrix(A) and all(x >= 0 for r in A.num for x in r):
        p = perron_vector(A, prec, sd)
        sd = SpectralData(sd.n, sd.eigenvalues, sd.intervals, sd.multiplicities, sd.C, prec, p)
    return sd

