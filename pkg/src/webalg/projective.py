"""Projective points, quadrics through point sets and rational normal curves.

A rational normal curve of degree m in P^m is stored by its basis matrix:
row j holds the ascending coefficients of the polynomial P_j(t), so the
curve is t -> (P_0(t), ..., P_m(t)) plus the point at t = infinity given by
the column of t^m coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

from . import exact, upoly
from .errors import ParseError
from .exact import fmt_rat, rat

INF = "inf"


@dataclass(frozen=True)
class PPoint:
    coords: tuple

    def __post_init__(self):
        cs = [rat(c) for c in self.coords]
        lead = next((c for c in cs if c), None)
        if lead is None:
            raise ValueError("the zero vector is not a projective point")
        object.__setattr__(self, "coords", tuple(c / lead for c in cs))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __repr__(self) -> str:
        return "PPoint(" + " : ".join(map(fmt_rat, self.coords)) + ")"


PointLike = Union[PPoint, Sequence]


def coords(p: PointLike) -> list:
    if isinstance(p, PPoint):
        return list(p.coords)
    return [rat(c) for c in p]


@dataclass(frozen=True)
class RNC:
    m: int
    basis: tuple

    def __post_init__(self):
        rows = tuple(tuple(rat(c) for c in row) for row in self.basis)
        if len(rows) != self.m + 1 or any(len(r) != self.m + 1 for r in rows):
            raise ValueError(f"basis of a degree-{self.m} curve must be {self.m + 1}x{self.m + 1}")
        if exact.det([list(r) for r in rows]) == 0:
            raise ValueError("basis polynomials are linearly dependent")
        object.__setattr__(self, "basis", rows)

    @classmethod
    def moment(cls, m: int) -> "RNC":
        return cls(m, tuple(tuple(exact.identity(m + 1)[j]) for j in range(m + 1)))

    def point(self, t) -> list:
        """Homogeneous coordinates at parameter t (``INF`` allowed)."""
        if t == INF:
            return [row[self.m] for row in self.basis]
        return [upoly.evaluate(row, rat(t)) for row in self.basis]

    def __repr__(self) -> str:
        return "RNC(" + "; ".join(" ".join(map(fmt_rat, r)) for r in self.basis) + ")"


# -- general position and quadrics ----------------------------------------


def general_position(points: Sequence[PointLike], m: Optional[int] = None) -> bool:
    """Every subfamily of at most m+1 points is projectively independent."""
    pts = [coords(p) for p in points]
    if not pts:
        return True
    if m is None:
        m = len(pts[0]) - 1
    if any(len(p) != m + 1 for p in pts):
        raise ValueError(f"points must live in P^{m}")
    size = min(len(pts), m + 1)
    return all(exact.rank([pts[i] for i in sub]) == size for sub in combinations(range(len(pts)), size))


def quadric_monomials(m: int) -> list:
    return [(i, j) for i in range(m + 1) for j in range(i, m + 1)]


@dataclass(frozen=True)
class QuadricSpace:
    m: int
    monomials: tuple
    basis: tuple
    codim: int


def quadric_conditions(points: Sequence[PointLike]) -> QuadricSpace:
    """Quadrics vanishing on ``points`` and the number of conditions imposed."""
    pts = [coords(p) for p in points]
    m = len(pts[0]) - 1
    mons = quadric_monomials(m)
    rows = [[p[i] * p[j] for i, j in mons] for p in pts]
    basis = exact.kernel_basis(rows, len(mons))
    return QuadricSpace(m, tuple(mons), tuple(tuple(b) for b in basis), len(mons) - len(basis))


def eval_quadric(q: Sequence, monomials: Sequence, p: Sequence) -> Fraction:
    return sum((c * p[i] * p[j] for c, (i, j) in zip(q, monomials)), Fraction(0))


# -- rational normal curves -----------------------------------------------


def _normalizer(pts: list, m: int) -> list:
    """Matrix A whose columns are the first m+1 points, so A e_j = p_j."""
    return exact.transpose(pts[: m + 1])


def _curve_from_normalized(a: list, rows: list, m: int) -> RNC:
    """Undo the normalization: original coordinates are A times normalized ones."""
    basis = [[sum((a[i][j] * rows[j][k] for j in range(m + 1)), Fraction(0)) for k in range(m + 1)] for i in range(m + 1)]
    return RNC(m, tuple(tuple(r) for r in basis))


def _pad(p: list, m: int) -> list:
    return list(p) + [Fraction(0)] * (m + 1 - len(p))


def normalized_rnc_data(xp: Sequence, xpp: Sequence) -> tuple:
    """Solve for (k_j, theta_j) from the images x', x'' of the last two points.

    With base points e_j at t = theta_j, x' at t = infinity and x'' at t = 0,
    the gauge k' = 1, theta_0 = 1 gives k_j = x'_j and
    theta_j = x'_j x''_0 / (x'_0 x''_j).  Works over any ring where the
    relevant entries are units (used with rationals and with jets).
    """
    k = list(xp)
    theta = [k[j] * xpp[0] / (k[0] * xpp[j]) for j in range(len(k))]
    return k, theta


def rnc_through(points: Sequence[PointLike]) -> RNC:
    """The unique rational normal curve through m+3 points in general position."""
    pts = [coords(p) for p in points]
    m = len(pts[0]) - 1
    if len(pts) != m + 3:
        raise ValueError(f"need exactly {m + 3} points in P^{m}, got {len(pts)}")
    if not general_position(pts, m):
        raise ValueError("not in general position")
    a = _normalizer(pts, m)
    b = exact.inverse(a)
    xp = exact.mat_vec(b, pts[m + 1])
    xpp = exact.mat_vec(b, pts[m + 2])
    if any(c == 0 for c in xp) or any(c == 0 for c in xpp):
        raise ValueError("not in general position")
    k, theta = normalized_rnc_data(xp, xpp)
    if len(set(theta)) != m + 1:
        raise ValueError("not in general position")
    rows = []
    for j in range(m + 1):
        rows.append(_pad(upoly.scale(upoly.from_roots([theta[i] for i in range(m + 1) if i != j]), k[j]), m))
    curve = _curve_from_normalized(a, rows, m)
    for p in pts:
        if point_on_rnc(curve, p) is None:
            raise ArithmeticError("constructed curve misses an input point")
    return curve


def castelnuovo_recover(points: Sequence[PointLike]) -> RNC:
    """Recover the rational normal curve through d >= 2m+3 points.

    Follows the quadric-based argument: after normalizing the first m+1
    points to the base points, the quadrics through the points have a basis
    x_i x_j + x_m L_ij(x') (i < j < m), and the rows with i = 0 give
    L_j = a_j x_j + b_j x_0, from which the curve is
    t -> (1, -b_1 t/(1 + a_1 t), ..., -b_{m-1} t/(1 + a_{m-1} t), t).
    """
    pts = [coords(p) for p in points]
    m = len(pts[0]) - 1
    if m < 2:
        raise ValueError("curve recovery needs m >= 2")
    if len(pts) < 2 * m + 3:
        raise ValueError(f"need at least {2 * m + 3} points in P^{m}, got {len(pts)}")
    if quadric_conditions(pts).codim != 2 * m + 1:
        raise ValueError("Castelnuovo hypothesis fails")
    if not general_position(pts, m):
        raise ValueError("not in general position")
    a = _normalizer(pts, m)
    b = exact.inverse(a)
    npts = [exact.mat_vec(b, p) for p in pts]

    # column order: x_i x_j (i<j<m), then x_i x_m (i<m), then squares
    r_mons = [(i, j) for i in range(m) for j in range(i + 1, m)]
    m_mons = [(i, m) for i in range(m)]
    s_mons = [(i, i) for i in range(m + 1)]
    mons = r_mons + m_mons + s_mons
    evals = [[p[i] * p[j] for i, j in mons] for p in npts]
    kern = exact.kernel_basis(evals, len(mons))
    red, pivots = exact.rref(kern, len(mons)) if kern else ([], [])
    if pivots != list(range(len(r_mons))):
        raise ValueError("degenerate configuration")
    offset = len(r_mons)
    rows_by_mon = {r_mons[i]: red[i] for i in range(len(r_mons))}
    avals, bvals = [], []
    for j in range(1, m):
        row = rows_by_mon[(0, j)]
        lin = row[offset : offset + m]
        if any(row[offset + m + s] != 0 for s in range(m + 1)):
            raise ValueError("degenerate configuration")
        aj, bj = lin[j], lin[0]
        if any(lin[i] != 0 for i in range(m) if i not in (0, j)):
            raise ValueError("degenerate configuration")
        if aj == 0 or bj == 0:
            raise ValueError("degenerate configuration")
        avals.append(aj)
        bvals.append(bj)
    if len(set(avals)) != len(avals):
        raise ValueError("degenerate configuration")

    denom = [Fraction(1)]
    for aj in avals:
        denom = upoly.mul(denom, [Fraction(1), aj])
    comps = [_pad(denom, m)]
    for j, (aj, bj) in enumerate(zip(avals, bvals)):
        poly = [Fraction(0), -bj]
        for i, ai in enumerate(avals):
            if i != j:
                poly = upoly.mul(poly, [Fraction(1), ai])
        comps.append(_pad(poly, m))
    comps.append(_pad(upoly.mul([Fraction(0), Fraction(1)], denom), m))
    curve = _curve_from_normalized(a, comps, m)
    for p in pts:
        if point_on_rnc(curve, p) is None:
            raise ValueError("degenerate configuration")
    return curve


def point_on_rnc(c: RNC, p: PointLike):
    """Parameter t with c(t) proportional to p, ``INF`` for the point at
    infinity, or None when p is not on the curve."""
    v = coords(p)
    if len(v) != c.m + 1:
        raise ValueError("dimension mismatch")
    w = exact.solve([list(r) for r in c.basis], v)
    m = c.m
    if w is None or not any(w):
        return None
    if w[0] == 0:
        return INF if all(x == 0 for x in w[:m]) else None
    w = [x / w[0] for x in w]
    t = w[1] if m >= 1 else Fraction(0)
    if all(w[k] == t ** k for k in range(m + 1)):
        return t
    return None


def same_curve(c1: RNC, c2: RNC) -> bool:
    """Projective equality tested by incidence of 2m+1 probe points."""
    if c1.m != c2.m:
        return False
    return all(point_on_rnc(c2, c1.point(t)) is not None for t in range(2 * c1.m + 1))


def hyperplane_section(c: RNC, h: Sequence) -> list:
    """Polynomial in t whose roots are the finite parameters where c meets h."""
    out: list = []
    for hi, row in zip(h, c.basis):
        out = upoly.add(out, upoly.scale(row, rat(hi)))
    return out


def span_dim(points: Sequence[PointLike]) -> int:
    """Projective dimension of the span (-1 for the empty set)."""
    pts = [coords(p) for p in points]
    return (exact.rank(pts) if pts else 0) - 1


def intersection_basis(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    """Basis of the linear intersection span(a) & span(b)."""
    a = [coords(p) for p in a]
    b = [coords(p) for p in b]
    if not a or not b:
        return []
    dim = len(a[0])
    stacked = exact.transpose(a + [[-x for x in v] for v in b])
    kern = exact.kernel_basis(stacked, len(a) + len(b))
    vecs = []
    for v in kern:
        vecs.append([sum((v[i] * a[i][k] for i in range(len(a))), Fraction(0)) for k in range(dim)])
    return exact.span_basis(vecs, dim) if vecs else []


def intersect_spans(a: Sequence[PointLike], b: Sequence[PointLike]) -> int:
    """Projective dimension of span(a) & span(b); -1 when empty."""
    return len(intersection_basis(a, b)) - 1


# -- text forms -------------------------------------------------------------


def format_points(points: Sequence[PointLike]) -> str:
    return "".join(" ".join(map(fmt_rat, coords(p))) + "\n" for p in points)


def parse_points(text: str) -> list:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                out.append([rat(tok) for tok in line.split()])
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
    if out and len({len(p) for p in out}) != 1:
        raise ParseError("points have inconsistent dimensions")
    return out


def format_rnc(c: RNC) -> str:
    return "".join(" ".join(map(fmt_rat, row)) + "\n" for row in c.basis)


def parse_rnc(text: str) -> RNC:
    rows = parse_points(text)
    if not rows:
        raise ParseError("empty curve file")
    return RNC(len(rows) - 1, tuple(tuple(r) for r in rows))
