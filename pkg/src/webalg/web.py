"""Web germs, the Chern bound, power ranks and the abelian-relation solver.

A d-web germ in n variables is given by d jets u_1..u_d vanishing at the
origin.  An abelian relation is a d-tuple of univariate jets f_a with
sum_a f_a(u_a) du_a = 0; the solver finds all of them modulo the working
truncation and reports the filtration by valuation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Optional, Sequence

from . import exact
from .errors import ParseError, PreconditionError
from .exact import fmt_rat, rat
from .jets import MJet, UJet, compose_u, format_jet, parse_jet


def monomials(n: int, q: int) -> list:
    """Exponent tuples of total degree q in n variables, lexicographically descending."""
    if n == 1:
        return [(q,)]
    out = []
    for k in range(q, -1, -1):
        out.extend((k,) + rest for rest in monomials(n - 1, q - k))
    return out


def forms_in_general_position(forms: Sequence[Sequence]) -> bool:
    """Every subfamily of at most n forms is linearly independent."""
    return _general_position(tuple(tuple(rat(c) for c in f) for f in forms))


@lru_cache(maxsize=256)
def _general_position(forms: tuple) -> bool:
    if not forms:
        return True
    size = min(len(forms), len(forms[0]))
    return all(exact.rank([forms[i] for i in sub]) == size for sub in combinations(range(len(forms)), size))


@dataclass(frozen=True)
class WebGerm:
    n: int
    d: int
    order: int
    u: tuple

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError("a web needs n >= 2 variables")
        if self.d < 1 or len(self.u) != self.d:
            raise PreconditionError(f"expected {self.d} defining jets, got {len(self.u)}")
        for a, ua in enumerate(self.u, 1):
            if ua.nvars != self.n or ua.order != self.order:
                raise PreconditionError(f"u {a} does not have n={self.n}, J={self.order}")
            if ua.const != 0:
                raise PreconditionError(f"u {a} does not vanish at the origin")
        object.__setattr__(self, "u", tuple(self.u))
        if not forms_in_general_position(self.linear_forms()):
            raise PreconditionError("linear parts are not in general position")

    def linear_forms(self) -> list:
        return [ua.linear_part() for ua in self.u]

    def truncate(self, order: int) -> "WebGerm":
        return WebGerm(self.n, self.d, order, tuple(ua.truncate(order) for ua in self.u))

    def is_linear(self) -> bool:
        return all(ua.degree() <= 1 for ua in self.u)


def chern_bound(n: int, d: int) -> int:
    """pi(n, d) = sum over q >= 1 of (d - q(n-1) - 1)^+."""
    if n < 2 or d < 1:
        raise PreconditionError("chern_bound needs n >= 2 and d >= 1")
    total, q = 0, 1
    while d - q * (n - 1) - 1 > 0:
        total += d - q * (n - 1) - 1
        q += 1
    return total


def power_coefficients(form: Sequence, q: int) -> list:
    """Coefficients of l^q in the degree-q monomial basis."""
    form = [rat(c) for c in form]
    fq = factorial(q)
    out = []
    for e in monomials(len(form), q):
        multinomial = fq
        c = Fraction(1)
        for a, k in zip(form, e):
            multinomial //= factorial(k)
            if k:
                c *= a ** k
        out.append(c * multinomial)
    return out


def power_rank(forms: Sequence[Sequence], q: int) -> int:
    """r_q = dimension of the span of the q-th powers of the forms."""
    if not forms_in_general_position(forms):
        raise PreconditionError("linear forms are not in general position")
    # scaling a form does not change the span of powers: work with integer forms
    rows = []
    monos = monomials(len(forms[0]), q)
    fq = factorial(q)
    for f in forms:
        ints = exact.integral_row(f)
        powers = [[a ** k for k in range(q + 1)] for a in ints]
        row = []
        for e in monos:
            c = fq
            for k in e:
                c //= factorial(k)
            for pw, k in zip(powers, e):
                c *= pw[k]
            row.append(c)
        rows.append(row)
    return exact.rank(rows)


def filtration_levels(n: int, d: int) -> int:
    """Largest q reported: the last level with a positive Chern term, plus a guard."""
    return -(-(d - 1) // (n - 1)) + 1


@dataclass(frozen=True)
class AbelianRelation:
    f: tuple

    @property
    def valuation(self) -> Optional[int]:
        vals = [fa.valuation() for fa in self.f if not fa.is_zero()]
        return min(vals) if vals else None

    def vector(self) -> list:
        return [c for fa in self.f for c in fa.coeffs]


@dataclass(frozen=True)
class RelationSpace:
    web: WebGerm
    order: int
    basis: tuple
    filtration: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list:
        return [r.vector() for r in self.basis]

    def dim_e(self, q: int) -> int:
        return self.filtration[q] if q < len(self.filtration) else 0


def relation_unknowns(w: WebGerm) -> int:
    """Coefficients of f_a in degrees 0..J-2 are determined by the truncated
    equations; degree J-1 only meets terms of degree >= J-1."""
    return w.order - 1


def relation_system(w: WebGerm) -> list:
    """Matrix whose kernel is the space of truncated abelian relations.

    Column (a, k) holds the coefficients of u_a^k * d_i u_a in total degree
    <= J-2 for every i; rows are indexed by (i, exponent).
    """
    if w.order < 3:
        raise PreconditionError("truncation too small: need J >= 3")
    top = w.order - 2
    ncoef = relation_unknowns(w)
    columns = []
    for ua in w.u:
        base = ua.truncate(w.order - 1)
        grads = ua.gradient()
        power = MJet.constant(1, w.n, w.order - 1)
        for k in range(ncoef):
            col = {}
            for i, g in enumerate(grads):
                for e, c in (power * g).coeffs.items():
                    if sum(e) <= top:
                        col[(i, e)] = c
            columns.append(col)
            power = power * base
    keys = sorted({key for col in columns for key in col})
    return [[col.get(key, Fraction(0)) for col in columns] for key in keys] or [[Fraction(0)] * len(columns)]


def _filtration_from_vectors(vectors: list, d: int, ncoef: int, levels: int) -> tuple:
    dims = []
    r = len(vectors)
    for q in range(levels + 1):
        low = [k for a in range(d) for k in range(a * ncoef, a * ncoef + min(q, ncoef))]
        if not low or not vectors:
            dims.append(r)
        else:
            dims.append(r - exact.rank([[v[c] for c in low] for v in vectors]))
    return tuple(dims)


def abelian_relations(w: WebGerm) -> RelationSpace:
    system = relation_system(w)
    ncoef = relation_unknowns(w)
    kern = exact.kernel_basis(system, w.d * ncoef)
    vectors = exact.span_basis(kern, w.d * ncoef) if kern else []
    basis = []
    for v in vectors:
        basis.append(AbelianRelation(tuple(UJet(ncoef - 1, tuple(v[a * ncoef : (a + 1) * ncoef])) for a in range(w.d))))
    levels = filtration_levels(w.n, w.d)
    return RelationSpace(w, w.order, tuple(basis), _filtration_from_vectors(vectors, w.d, ncoef, levels))


def relation_residual(w: WebGerm, rel: AbelianRelation) -> list:
    """Coefficients of sum_a f_a(u_a) du_a, truncated at degree J-2."""
    order = w.order - 1
    out = []
    for i in range(w.n):
        acc = MJet.zero(w.n, order)
        for fa, ua in zip(rel.f, w.u):
            acc = acc + compose_u(UJet(order, fa.coeffs), ua.truncate(order)) * ua.ddx(i)
        out.append(acc.truncate(order - 1))
    return out


# -- certificate -------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    n: int
    d: int
    order: int
    jet1_matrix: tuple
    jet1_rank: int
    required: int
    verdict: bool
    filtration: tuple
    quotient_dims: tuple
    quotient_max: tuple
    chern: int
    valuation_one: int = field(default=0)


def jet1_matrix(rs: RelationSpace) -> list:
    """Rows = relations, columns = (a_1, b_1, ..., a_d, b_d), the 0- and
    1-jets of the f_a."""
    out = []
    for rel in rs.basis:
        row = []
        for fa in rel.f:
            row.extend([fa.coeffs[0], fa.coeffs[1] if fa.order >= 1 else Fraction(0)])
        out.append(row)
    return out


def certify_max_rank_val1(w: WebGerm, rs: Optional[RelationSpace] = None) -> Certificate:
    """Check for 2d-3n+1 relations with independent 1-jets."""
    if w.d < 2 * w.n:
        raise PreconditionError("hypothesis range violated: need d >= 2n")
    if rs is None:
        rs = abelian_relations(w)
    mat = jet1_matrix(rs)
    rk = exact.rank(mat) if mat else 0
    need = 2 * w.d - 3 * w.n + 1
    e0, e1, e2 = rs.dim_e(0), rs.dim_e(1), rs.dim_e(2)
    return Certificate(
        n=w.n,
        d=w.d,
        order=w.order,
        jet1_matrix=tuple(tuple(r) for r in mat),
        jet1_rank=rk,
        required=need,
        verdict=rk >= need,
        filtration=rs.filtration,
        quotient_dims=(e0 - e1, e1 - e2),
        quotient_max=(w.d - w.n, w.d - 2 * w.n + 1),
        chern=chern_bound(w.n, w.d),
        valuation_one=e1 - e2,
    )


@dataclass(frozen=True)
class StabilityReport:
    low_order: int
    high_order: int
    low: tuple
    high: tuple
    stable: bool


def stabilization_check(w: WebGerm, high: Optional[RelationSpace] = None) -> StabilityReport:
    """Compare the filtration at J-1 and at J."""
    if w.order < 4:
        raise PreconditionError("stabilization check needs J >= 4")
    if high is None:
        high = abelian_relations(w)
    low = abelian_relations(w.truncate(w.order - 1))
    return StabilityReport(w.order - 1, w.order, low.filtration, high.filtration, low.filtration == high.filtration)


# -- text forms --------------------------------------------------------------

_HEADER = re.compile(r"^web\s+n=(\d+)\s+d=(\d+)\s+J=(\d+)\s*$")
_BLOCK = re.compile(r"^u\s+(\d+)\s*:\s*$")


def format_web(w: WebGerm) -> str:
    lines = [f"web n={w.n} d={w.d} J={w.order}"]
    for a, ua in enumerate(w.u, 1):
        lines.append(f"u {a}:")
        lines.extend(format_jet(ua))
    return "\n".join(lines) + "\n"


def parse_web(text: str) -> WebGerm:
    lines = [ln.split("#", 1)[0].rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise ParseError("empty web file")
    mt = _HEADER.match(lines[0].strip())
    if not mt:
        raise ParseError(f"bad web header: {lines[0]!r}")
    n, d, order = (int(g) for g in mt.groups())
    blocks: dict = {}
    current = None
    for ln in lines[1:]:
        mb = _BLOCK.match(ln.strip())
        if mb:
            current = int(mb.group(1))
            if current in blocks:
                raise ParseError(f"duplicate block u {current}")
            blocks[current] = []
        elif current is None:
            raise ParseError(f"jet line before any u block: {ln!r}")
        else:
            blocks[current].append(ln)
    if sorted(blocks) != list(range(1, d + 1)):
        raise ParseError(f"expected blocks u 1..u {d}, found {sorted(blocks)}")
    try:
        u = tuple(parse_jet(blocks[a], n, order) for a in range(1, d + 1))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return WebGerm(n, d, order, u)


def format_relations(rs: RelationSpace) -> str:
    lines = [f"relations dim={rs.dim} J={rs.order}"]
    for r, rel in enumerate(rs.basis, 1):
        lines.append(f"relation {r}:")
        for a, fa in enumerate(rel.f, 1):
            lines.append(f"f {a}: " + " ".join(map(fmt_rat, fa.coeffs)))
    lines.append("filtration " + " ".join(f"E({q})={v}" for q, v in enumerate(rs.filtration)))
    return "\n".join(lines) + "\n"
