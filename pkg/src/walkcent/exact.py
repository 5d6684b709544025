"""Exact rational linear algebra: walk counts, characteristic polynomials,
nullspaces, inverses and the cospectrality / walk-regularity decisions.

Nothing in here touches floating point. A matrix is stored as an integer
numerator matrix over a single common denominator, so powers stay in
integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import ParameterError, SingularMatrixError


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ParameterError(f"refusing float {text!r}; pass an exact rational")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"not a rational literal: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _matmul(X, Y):
    cols = list(zip(*Y))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in X]


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix ``num / den`` with integer ``num`` and ``den >= 1`` minimal."""

    num: tuple
    den: int = 1

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence]) -> "ExactMatrix":
        frows = [[parse_rational(x) for x in row] for row in rows]
        n = len(frows)
        if any(len(r) != n for r in frows):
            raise ValueError("matrix must be square")
        den = lcm(1, *(x.denominator for r in frows for x in r))
        num = tuple(tuple(int(x * den) for x in r) for r in frows)
        return cls(num, den)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.num)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(self.num[i][j], self.den)

    def rows(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.den) for x in r] for r in self.num]

    @property
    def is_integral(self) -> bool:
        return self.den == 1

    def is_symmetric(self) -> bool:
        n = self.n
        return all(self.num[i][j] == self.num[j][i] for i in range(n) for j in range(i))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix.from_rows(
            [[Fraction(x, self.den * other.den) for x in r] for r in _matmul(self.num, other.num)]
        )

    def inf_norm(self) -> Fraction:
        return max((Fraction(sum(abs(x) for x in r), self.den) for r in self.num), default=Fraction(0))

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[format_rational(x) for x in r] for r in self.rows()]}

    @classmethod
    def from_json(cls, data: dict) -> "ExactMatrix":
        return cls.from_rows(data["entries"])


def integer_powers(A: ExactMatrix, R: int):
    """Yield ``(r, M^r)`` for r = 1..R where A = M / den."""
    M = [list(r) for r in A.num]
    P = M
    for r in range(1, R + 1):
        yield r, P
        if r < R:
            P = _matmul(P, M)


@dataclass(frozen=True)
class WalkTable:
    """``table[i][r-1] == [A^r]_ii`` for r = 1..R."""

    table: tuple

    @property
    def R(self) -> int:
        return len(self.table[0]) if self.table else 0

    def __getitem__(self, i):
        return self.table[i]

    def __len__(self):
        return len(self.table)

    def trace(self, r: int) -> Fraction:
        return sum((row[r - 1] for row in self.table), Fraction(0))

    def to_json(self) -> dict:
        return {"R": self.R, "walks": [[format_rational(x) for x in row] for row in self.table]}

    @classmethod
    def from_json(cls, data: dict) -> "WalkTable":
        return cls(tuple(tuple(parse_rational(x) for x in row) for row in data["walks"]))


def walk_counts(A: ExactMatrix, R: int) -> WalkTable:
    if R < 1:
        raise ParameterError("R must be >= 1")
    n = A.n
    cols = [[] for _ in range(n)]
    try:
        for r, P in integer_powers(A, R):
            scale = A.den ** r
            for i in range(n):
                cols[i].append(Fraction(P[i][i], scale))
    except MemoryError as exc:
        raise MemoryError(f"walk table n={n}, R={R} does not fit in memory") from exc
    return WalkTable(tuple(tuple(c) for c in cols))


@dataclass(frozen=True)
class CharPoly:
    """det(xI - A), coefficients in descending degree; ``coeffs[0] == 1``."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CharPoly":
        return cls(tuple(parse_rational(c) for c in data["coeffs"]))

    def __str__(self):
        terms = []
        d = self.degree
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            p = d - k
            mono = "" if p == 0 else ("x" if p == 1 else f"x^{p}")
            mag = abs(c)
            coef = str(mag) if (mag != 1 or p == 0) else ""
            sign = "-" if c < 0 else "+"
            terms.append((sign, coef + mono))
        if not terms:
            return "0"
        s0, t0 = terms[0]
        out = ("-" if s0 == "-" else "") + t0
        for s, t in terms[1:]:
            out += f" {s} {t}"
        return out


def char_poly(A: ExactMatrix) -> CharPoly:
    """Faddeev-LeVerrier on the integer numerator matrix, rescaled by den."""
    n = A.n
    M = [list(r) for r in A.num]
    c = [0] * (n + 1)  # c[k] multiplies x^(n-k)
    c[0] = 1
    Mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        if k == 1:
            Mk = [[int(i == j) for j in range(n)] for i in range(n)]
        else:
            Mk = _matmul(M, Mk)
            for i in range(n):
                Mk[i][i] += c[k - 1]
        AM = _matmul(M, Mk)
        tr = sum(AM[i][i] for i in range(n))
        q, rem = divmod(-tr, k)
        assert rem == 0
        c[k] = q
    return CharPoly(tuple(Fraction(c[k], A.den ** k) for k in range(n + 1)))


def walk_signatures(A: ExactMatrix, walks: WalkTable | None = None):
    n = A.n
    if walks is None:
        walks = walk_counts(A, max(n - 1, 1))
    return [tuple(walks[i][: max(n - 1, 1)]) for i in range(n)]


def cospectral(A: ExactMatrix, pair, walks: WalkTable | None = None) -> bool:
    """[A^r]_ii == [A^r]_jj for r = 1..n-1; Cayley-Hamilton covers the rest."""
    i, j = pair
    n = A.n
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise ParameterError(f"bad vertex pair {pair!r} for n={n}")
    R = n - 1
    if walks is None:
        walks = walk_counts(A, R)
    return walks[i][:R] == walks[j][:R]


def cospectral_classes(A: ExactMatrix, walks: WalkTable | None = None) -> list[list[int]]:
    """Partition of the vertices into exact cospectrality classes, sorted by smallest member."""
    groups: dict = {}
    for v, sig in enumerate(walk_signatures(A, walks)):
        groups.setdefault(sig, []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def walk_regular(A: ExactMatrix, walks: WalkTable | None = None) -> bool:
    return len(cospectral_classes(A, walks)) == 1


def _rref(rows):
    """Reduced row echelon form over Fractions; returns (matrix, pivot columns)."""
    M = [list(r) for r in rows]
    m = len(M)
    ncols = len(M[0]) if M else 0
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, m) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        p = M[row][col]
        M[row] = [x / p for x in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    return M, pivots


def rational_nullspace(B: ExactMatrix) -> list[list[Fraction]]:
    """Canonical RREF basis of Ker(B): one vector per free column, that entry set to 1."""
    n = B.n
    R, pivots = _rref(B.rows())
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][f]
        basis.append(v)
    return basis


def rational_inverse(B: ExactMatrix) -> ExactMatrix:
    n = B.n
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(B.rows())]
    R, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return ExactMatrix.from_rows([r[n:] for r in R])


def matvec(B: ExactMatrix, v) -> list[Fraction]:
    return [sum((Fraction(a, B.den) * x for a, x in zip(row, v)), Fraction(0)) for row in B.num]
