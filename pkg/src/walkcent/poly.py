"""Univariate polynomials over Q: square-free decomposition and Sturm root isolation.

Polynomials are lists of Fractions in descending degree, no leading zeros
(the zero polynomial is ``[]``).
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm, gcd


def trim(p):
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    return [Fraction(c) for c in p[k:]]


def degree(p):
    return len(p) - 1


def derivative(p):
    d = degree(p)
    return trim([c * (d - k) for k, c in enumerate(p[:-1])])


def monic(p):
    return [c / p[0] for c in p] if p else []


def divmod_poly(a, b):
    a = trim(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        f = r[0] / b[0]
        q[len(q) - (len(r) - len(b)) - 1] = f
        for k in range(len(b)):
            r[k] -= f * b[k]
        r = trim(r)
    return trim(q), r


def gcd_poly(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree_decomposition(p):
    """Yun's algorithm. Returns ``[(f_k, k)]`` with p = lc * prod f_k^k, each f_k monic square-free."""
    p = monic(trim(p))
    out = []
    if degree(p) < 1:
        return out
    dp = derivative(p)
    a = gcd_poly(p, dp)
    b = divmod_poly(p, a)[0]
    c = divmod_poly(dp, a)[0]
    d = [x - y for x, y in zip(_pad(c, len(b) - 1), _pad(derivative(b), len(b) - 1))]
    d = trim(d)
    k = 1
    while degree(b) > 0:
        a = gcd_poly(b, d)
        if degree(a) > 0:
            out.append((a, k))
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = trim([x - y for x, y in zip(_pad(c, len(b) - 1), _pad(derivative(b), len(b) - 1))])
        k += 1
    return out


def _pad(p, length):
    p = list(p)
    return [Fraction(0)] * (length - len(p)) + p


def primitive_integer(p):
    """Scale to integer coefficients with positive leading coefficient and content 1."""
    den = lcm(1, *(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    return ints


def _eval_scaled(ints, num, den):
    """den^d * p(num/den), computed in integers."""
    acc = 0
    dk = 1
    for c in ints:
        acc = acc * num + c * dk
        dk *= den
    return acc


def sturm_chain(p):
    p = trim(p)
    chain = [p, derivative(p)]
    while chain[-1] and degree(chain[-1]) > 0:
        r = divmod_poly(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append([-c for c in r])
    return [primitive_integer(q) if degree(q) > 0 else _sign_const(q) for q in chain if q]


def _sign_const(q):
    return [1 if q[0] > 0 else -1]


def _variations(chain, x):
    signs = []
    for q in chain:
        s = _sgn(q, x)
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in (lo, hi] for a square-free polynomial's Sturm chain."""
    return _variations(chain, lo) - _variations(chain, hi)


def root_bound(p) -> Fraction:
    """Cauchy bound: every root has |x| < bound."""
    p = monic(trim(p))
    return 1 + max((abs(c) for c in p[1:]), default=Fraction(0))


def isolate_real_roots(p):
    """Disjoint isolating intervals ``(lo, hi]`` for the real roots of square-free ``p``, ascending.

    Split points are chosen off the roots, so no endpoint is ever a root.
    """
    chain = sturm_chain(p)
    ints = chain[0]
    B = root_bound(p)
    out = []
    todo = [(-B, B, count_roots(chain, -B, B))]
    while todo:
        lo, hi, k = todo.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        for t in _SPLITS:
            mid = lo + (hi - lo) * t
            if _sgn(ints, mid) != 0:
                break
        left = count_roots(chain, lo, mid)
        todo.append((mid, hi, k - left))
        todo.append((lo, mid, left))
    out.sort()
    return out, chain


# a degree-d polynomial vanishes at no more than d of these
_SPLITS = [Fraction(1, 2)] + [Fraction(j, 2 * j + 1) for j in range(1, 200)]


def refine_root(ints, lo: Fraction, hi: Fraction, width: Fraction):
    """Bisect an isolating interval ``(lo, hi]`` of a simple root down to ``hi - lo <= width``."""
    if lo == hi:
        return lo, hi
    s_hi = _sgn(ints, hi)
    if s_hi == 0:
        return hi, hi
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = _sgn(ints, mid)
        if s == 0:
            return mid, mid
        if s == s_hi:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _sgn(ints, x):
    v = _eval_scaled(ints, x.numerator, x.denominator)
    return (v > 0) - (v < 0)
