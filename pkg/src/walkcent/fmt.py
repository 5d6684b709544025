"""Deterministic decimal rendering of high-precision values.

Values are truncated toward zero (never rounded) to a fixed number of
significant digits, working from the exact binary value of the mpf, so the
output does not depend on how the last guard digits happened to round.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)  # plain floats only; an existing mpf must not be re-rounded
    if not mpmath.isfinite(x):
        raise ValueError(f"cannot render non-finite value {x}")
    neg, man, exp, _ = x._mpf_
    man, exp = (-1) ** neg * int(man), int(exp)
    if man == 0:
        return Fraction(0)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


def decimal_str(x, digits: int, direction: str = "trunc") -> str:
    """``digits`` significant decimal digits of ``x``, truncated.

    ``direction`` may be ``"floor"`` or ``"ceil"`` to get a one-sided bound
    instead (used for bracket endpoints). Positional notation for moderate
    magnitudes, otherwise ``d.ddd...e<k>``.
    """
    q = _exact(x)
    if q == 0:
        return "0." + "0" * (digits - 1) if digits > 1 else "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    # e = floor(log10 q)
    e = len(str(q.numerator)) - len(str(q.denominator))
    if Fraction(10) ** e > q:
        e -= 1
    elif Fraction(10) ** (e + 1) <= q:
        e += 1
    shift = digits - 1 - e
    scaled = q * Fraction(10) ** shift
    mi = scaled.numerator // scaled.denominator
    up = (direction == "ceil" and sign == "") or (direction == "floor" and sign == "-")
    if up and mi != scaled:
        mi += 1
        if len(str(mi)) > digits:
            return decimal_str(Fraction(mi, 10 ** shift) * (-1 if sign else 1), digits)
    m = str(mi)
    assert len(m) == digits
    if -6 <= e < digits:
        if e >= 0:
            whole, frac = m[: e + 1], m[e + 1:]
        else:
            whole, frac = "0", "0" * (-e - 1) + m
        return sign + whole + ("." + frac if frac else "")
    return f"{sign}{m[0]}.{m[1:]}e{e:+d}"


def tagged(x, digits: int) -> dict:
    return {"value": decimal_str(x, digits), "digits": digits}


def mpf_from_decimal(s: str, dps: int):
    with mpmath.workdps(dps):
        return mpmath.mpf(s)
