"""Diagonal entry functions of the adjacency matrix and their vertex partitions.

Two routes to ``[exp(beta A)]_ii``: an exactly summed Taylor series (works
for directed and weighted input) and the eigenvalue expansion
``sum_h C[h][i] exp(beta mu_h)`` for symmetric input.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import mpmath
from mpmath import mpf

from . import poly
from .errors import ParameterError, PrecisionError
from .exact import ExactMatrix, char_poly, integer_powers, parse_rational, rational_inverse, walk_counts
from .fmt import decimal_str, tagged
from .spectral import Precision, SpectralData, _as_precision, _to_mpf, perron_vector


def as_beta(beta):
    """Rational beta as Fraction, otherwise an mpf flagged non-exact by its type."""
    if isinstance(beta, mpmath.mpf):
        b = beta
    else:
        b = parse_rational(beta)
    if b == 0:
        raise ParameterError("beta must be nonzero")
    return b


@dataclass(frozen=True)
class CentralityReport:
    function: str
    backend: str
    parameter: object
    precision: Precision
    values: tuple
    classes: tuple = ()
    borderline: tuple = ()
    exact: tuple | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def n(self):
        return len(self.values)

    def class_index(self):
        idx = [0] * self.n
        for c, members in enumerate(self.classes):
            for v in members:
                idx[v] = c
        return idx

    def single_class(self) -> bool:
        return len(self.classes) == 1

    def to_json(self) -> dict:
        P = self.precision.digits
        out = {
            "function": self.function,
            "backend": self.backend,
            "parameter": None if self.parameter is None else _param_str(self.parameter, P),
            "digits": P,
            "values": [tagged(v, P) for v in self.values],
            "class_index": self.class_index(),
            "classes": [list(c) for c in self.classes],
            "borderline": [list(p) for p in self.borderline],
        }
        if self.exact is not None:
            out["exact"] = [str(x) for x in self.exact]
        for k, v in self.extra.items():
            out[k] = v
        return out

    def to_csv(self) -> str:
        P = self.precision.digits
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vertex", "value", "digits", "class"])
        for i, (v, c) in enumerate(zip(self.values, self.class_index())):
            w.writerow([i, decimal_str(v, P), P, c])
        return buf.getvalue()


def _param_str(p, digits):
    if isinstance(p, Fraction):
        return str(p)
    return decimal_str(p, digits)


def classify_values(values, eps):
    """Group sorted values whose neighbours differ by less than ``eps``.

    Returns ``(classes, borderline)``; a borderline pair sits in the band
    ``[eps, 10 eps)`` and needs more precision before it can be trusted.
    """
    order = sorted(range(len(values)), key=lambda i: values[i])
    classes = []
    borderline = []
    for a, b in zip(order, order[1:]) if order else ():
        gap = abs(values[b] - values[a])
        if not classes:
            classes.append([a])
        if gap < eps:
            classes[-1].append(b)
        else:
            if gap < 10 * eps:
                borderline.append(tuple(sorted((a, b))))
            classes.append([b])
    if len(order) == 1:
        classes = [[order[0]]]
    classes = [sorted(c) for c in classes]
    classes.sort(key=lambda c: c[0])
    return tuple(tuple(c) for c in classes), tuple(borderline)


def classify_equivalence(report: CentralityReport, eps=None):
    """Vertex partition by value agreement within ``eps_class``; see ``classify_values``."""
    if eps is None:
        eps = report.precision.eps_class
    with report.precision.workdps():
        return classify_values(report.values, eps)


def _report(function, backend, parameter, prec, values, exact=None, extra=None):
    with prec.workdps():
        classes, border = classify_values(values, prec.eps_class)
    return CentralityReport(function, backend, parameter, prec, tuple(values), classes, border,
                            exact, extra or {})


def taylor_terms_needed(x, digits: int) -> int:
    """Smallest K with x^K / K! * e^x < 10^-(digits + 5), for x = |beta| * ||A||_inf."""
    with mpmath.workdps(30):
        target = mpf(10) ** (-(digits + 5))
        xf = _to_mpf(x) if isinstance(x, Fraction) else mpf(x)
        ex = mpmath.exp(xf)
        K = 1
        term = xf
        while term * ex >= target:
            K += 1
            term = term * xf / K
    return K


def subgraph_centrality_taylor(A: ExactMatrix, beta, prec=None) -> CentralityReport:
    """Diagonal of exp(beta A) by an exactly summed Taylor series.

    Terms ``beta^k [A^k]_ii / k!`` for k < K are summed as one exact
    rational per vertex, where K makes the tail bound drop below
    ``10^-(digits+5)``; the rational is rounded only at the end.
    """
    prec = _as_precision(prec)
    beta = as_beta(beta)
    n = A.n
    norm = A.inf_norm()
    if isinstance(beta, Fraction):
        K = taylor_terms_needed(abs(beta) * norm, prec.digits)
        p, q = beta.numerator, beta.denominator * A.den
        # sum_k p^k W_k (q)^(K-1-k) (K-1)!/k!  over common denominator q^(K-1) (K-1)!
        top = K - 1
        acc = [q ** top * factorial(top) for _ in range(n)]  # k = 0 term
        fk = factorial(top)
        for k, P in integer_powers(A, top):
            fk //= k
            wt = p ** k * q ** (top - k) * fk
            for i in range(n):
                if P[i][i]:
                    acc[i] += wt * P[i][i]
        den = q ** top * factorial(top)
        exact = tuple(Fraction(a, den) for a in acc)
        with prec.workdps():
            values = [mpf(x.numerator) / x.denominator for x in exact]
        return _report("subgraph", "taylor", beta, prec, values, exact=None,
                       extra={"terms": K})
    with prec.workdps():
        K = taylor_terms_needed(abs(beta) * _to_mpf(norm), prec.digits)
        vals = [mpf(1)] * n
        bk = mpf(1)
        for k, P in integer_powers(A, K - 1):
            bk = bk * beta / (k * A.den)
            for i in range(n):
                if P[i][i]:
                    vals[i] += bk * P[i][i]
    return _report("subgraph", "taylor", beta, prec, vals, extra={"terms": K, "beta_exact": False})


def subgraph_centrality_spectral(sd: SpectralData, beta, prec=None) -> CentralityReport:
    prec = _as_precision(prec) if prec is not None else sd.precision
    beta = as_beta(beta)
    if sd.precision.digits < prec.digits:
        raise PrecisionError(
            f"spectral data carries {sd.precision.digits} digits, {prec.digits} requested"
        )
    with prec.workdps():
        b = beta if isinstance(beta, mpmath.mpf) else _to_mpf(beta)
        ex = [mpmath.exp(b * mu) for mu in sd.eigenvalues]
        values = [mpmath.fsum(row[i] * e for row, e in zip(sd.C, ex)) for i in range(sd.n)]
    return _report("subgraph", "spectral", beta, prec, values)


def spectral_radius_below(A: ExactMatrix, bound: Fraction) -> bool:
    """Exactly decide rho(A) < bound for symmetric A (no eigenvalue with |x| >= bound)."""
    cp = char_poly(A)
    for f, _ in poly.squarefree_decomposition(list(cp.coeffs)):
        if poly.degree(f) == 1:
            if abs(-f[1] / f[0]) >= bound:
                return False
            continue
        chain = poly.sturm_chain(f)
        B = poly.root_bound(f) + abs(bound) + 1
        # roots in [bound, B) and (-B, -bound]
        hi = poly.count_roots(chain, bound, B) + int(poly._sgn(chain[0], bound) == 0)
        lo = poly.count_roots(chain, -B, -bound)
        if hi or lo:
            return False
    return True


def resolvent_centrality(A: ExactMatrix, alpha, prec=None) -> CentralityReport:
    """Diagonal of (I - alpha A)^-1 by exact rational inversion, 0 < alpha < 1/rho(A).

    For symmetric A the range is checked exactly against the spectrum; for
    non-symmetric A the row-sum (Gershgorin) bound on rho is used instead.
    """
    prec = _as_precision(prec)
    alpha = parse_rational(alpha)
    if alpha <= 0:
        raise ParameterError("alpha must be positive")
    if A.is_symmetric():
        ok = spectral_radius_below(A, 1 / alpha)
    else:
        norm = A.inf_norm()
        ok = norm == 0 or alpha < 1 / norm
    if not ok:
        raise ParameterError(f"alpha={alpha} is outside the convergence range 0 < alpha < 1/rho(A)")
    n = A.n
    rows = [[Fraction(int(i == j)) - alpha * x for j, x in enumerate(r)] for i, r in enumerate(A.rows())]
    inv = rational_inverse(ExactMatrix.from_rows(rows))
    exact = tuple(inv[i, i] for i in range(n))
    with prec.workdps():
        values = [_to_mpf(x) for x in exact]
    return _report("resolvent", "exact-inverse", alpha, prec, values, exact=exact)


def walk_entropy(report: CentralityReport, prec=None):
    """Shannon entropy of the normalized subgraph centralities; returns ``(S, p)``."""
    if report.function != "subgraph":
        raise ParameterError("walk entropy needs a subgraph-centrality report")
    prec = _as_precision(prec) if prec is not None else report.precision
    with prec.workdps():
        tr = mpmath.fsum(report.values)
        p = [v / tr for v in report.values]
        S = -mpmath.fsum(x * mpmath.log(x) for x in p)
    return S, p


def degree_centrality(A: ExactMatrix):
    if not A.is_symmetric():
        raise ParameterError("degree centrality here is defined for undirected graphs")
    w = walk_counts(A, 2)
    return tuple(w[i][1] for i in range(A.n))


def degree_report(A: ExactMatrix, prec=None) -> CentralityReport:
    prec = _as_precision(prec)
    exact = degree_centrality(A)
    with prec.workdps():
        values = [_to_mpf(x) for x in exact]
    return _report("degree", "exact", None, prec, values, exact=exact)


def eigenvector_centrality(A: ExactMatrix, prec=None, sd=None) -> CentralityReport:
    prec = _as_precision(prec)
    vec = perron_vector(A, prec, sd)
    return _report("eigenvector", "inverse-iteration", None, prec, list(vec))


def entropy_json(S, p, report: CentralityReport, n: int) -> dict:
    P = report.precision.digits
    with report.precision.workdps():
        ln_n = mpmath.log(n)
        gap = ln_n - S
    return {
        "beta": _param_str(report.parameter, P),
        "entropy": tagged(S, P),
        "ln_n": tagged(ln_n, P),
        "gap": tagged(gap, P),
        "maximal": report.single_class(),
        "p": [tagged(x, P) for x in p],
    }
