"""Exact rational arithmetic and dense linear algebra over Q.

Matrices are plain row-major lists of lists of :class:`fractions.Fraction`.
Every routine is a pure function: inputs are never mutated and identical
inputs give identical outputs.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Rat = Fraction
Vector = list
Matrix = list


def rat(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or ``"p/q"`` text) to a canonical rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if not text:
            raise ValueError("empty rational literal")
        num, sep, den = text.partition("/")
        try:
            if sep:
                q = int(den)
                if q <= 0:
                    raise ValueError(f"denominator must be positive in {text!r}")
                return Fraction(int(num), q)
            return Fraction(int(num))
        except ValueError as exc:
            raise ValueError(f"bad rational literal {text!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def fmt_rat(x) -> str:
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[rat(v) for v in row] for row in rows]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Matrix, ncols: Optional[int] = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def mat_vec(a: Matrix, v: Sequence) -> Vector:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def rref(m: Matrix, ncols: Optional[int] = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    ``ncols`` is only needed when ``m`` has no rows.
    """
    rows = [list(map(rat, row)) for row in m]
    cols = len(rows[0]) if rows else (ncols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        pivot_row = [x * inv for x in rows[r]]
        rows[r] = pivot_row
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [x - f * y for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return rows, pivots


def integral_row(row: Sequence) -> list[int]:
    """The row times the lcm of its denominators."""
    row = [rat(x) for x in row]
    den = 1
    for x in row:
        den = den * x.denominator // gcd(den, x.denominator)
    return [int(x * den) for x in row]


def rank(m: Matrix) -> int:
    """Rank by fraction-free forward elimination on integer rows."""
    rows = [r for r in (integral_row(row) for row in m) if any(r)]
    rk = 0
    while rows:
        c = min(next(j for j, x in enumerate(r) if x) for r in rows)
        pivot = next(r for r in rows if r[c])
        rest = []
        for r in rows:
            if r is pivot:
                continue
            if r[c]:
                a, b = pivot[c], r[c]
                r = [a * x - b * y for x, y in zip(r, pivot)]
                g = 0
                for x in r:
                    g = gcd(g, x)
                if g > 1:
                    r = [x // g for x in r]
            if any(r):
                rest.append(r)
        rows = rest
        rk += 1
    return rk


def kernel_basis(m: Matrix, ncols: Optional[int] = None) -> list[Vector]:
    """Canonical basis of ``{v : m v = 0}``.

    One vector per free column of the rref, carrying a 1 in that column.
    """
    red, pivots = rref(m, ncols)
    cols = len(m[0]) if m else (ncols or 0)
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    """A particular solution of ``m x = b`` (free variables set to 0), or None."""
    if len(b) != len(m):
        raise ValueError(f"right-hand side has length {len(b)}, expected {len(m)}")
    cols = len(m[0]) if m else (ncols or 0)
    aug = [list(row) + [rat(bi)] for row, bi in zip(m, b)]
    red, pivots = rref(aug, cols + 1)
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for i, p in enumerate(pivots):
        x[p] = red[i][cols]
    return x


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("inverse of a non-square matrix")
    aug = [list(row) + e for row, e in zip(m, identity(n))]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in red]


def det(m: Matrix) -> Fraction:
    n = len(m)
    rows = [list(map(rat, row)) for row in m]
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            out = -out
        out *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return out


def span_basis(vectors: Sequence[Sequence], dim: Optional[int] = None) -> Matrix:
    """Canonical (rref) basis of the span of ``vectors``."""
    red, pivots = rref([list(v) for v in vectors], dim)
    return red[: len(pivots)]


def in_span(v: Sequence, vectors: Sequence[Sequence]) -> bool:
    if not vectors:
        return all(x == 0 for x in v)
    return rank([list(u) for u in vectors] + [list(v)]) == rank([list(u) for u in vectors])


def proportional(u: Sequence, v: Sequence) -> bool:
    """True iff u and v are nonzero and represent the same projective point."""
    if all(x == 0 for x in u) or all(x == 0 for x in v):
        return False
    return rank([list(u), list(v)]) == 1
