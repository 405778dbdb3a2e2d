"""Poincare vectors, the curves C(x) and their incidence properties.

From l = 2d-3n+1 abelian relations with independent 1-jets one gets vectors
Z_a(x) in Q^l with sum_a Z_a du_a = 0.  In an adapted coframe these give the
curve field Z*(x, t) = sum_a P_a(x, t) k_a(x) Z_a(x), a degree-(d-n-1)
rational normal curve through the points p_a(x) = [Z_a(x)].

Checks away from the origin evaluate jets as polynomials.  They are exact
statements about the web when its defining jets and relations are genuine
polynomials satisfying the relations identically; ``polynomial_exact``
records whether that was verified.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from . import exact, upoly
from .errors import PreconditionError
from .exact import rat
from .jets import MJet, UJet, compose, compose_u, identity_map, invert_map
from .projective import RNC, point_on_rnc
from .structure import AdaptedCoframe, adapted_coframe
from .web import AbelianRelation, RelationSpace, WebGerm, certify_max_rank_val1, relation_residual


# -- graded basis and the vectors Z_a ------------------------------------------


def graded_basis(rs: RelationSpace) -> tuple:
    """Relations split as (d-n of valuation 0, d-2n+1 of valuation 1).

    Row reduction in degree-major column order puts rows pivoting in the
    degree-0 block first and rows pivoting in the degree-1 block next; the
    latter vanish in degree 0.
    """
    w = rs.web
    d = w.d
    ncoef = w.order - 1
    perm = [a * ncoef + k for k in range(ncoef) for a in range(d)]
    vectors = rs.vectors()
    if not vectors:
        return (), ()
    red, pivots = exact.rref([[v[c] for c in perm] for v in vectors])
    val0, val1 = [], []
    for row, p in zip(red, pivots):
        back = [Fraction(0)] * len(row)
        for pos, c in enumerate(perm):
            back[c] = row[pos]
        rel = AbelianRelation(tuple(UJet(ncoef - 1, tuple(back[a * ncoef : (a + 1) * ncoef])) for a in range(d)))
        if p < d:
            val0.append(rel)
        elif p < 2 * d:
            val1.append(rel)
    return tuple(val0), tuple(val1)


@dataclass(frozen=True)
class PoincareData:
    web: WebGerm
    l: int
    m: int
    order: int
    basis: tuple
    n_val0: int
    n_val1: int
    Z: tuple
    Zp: tuple
    eq43_exact: bool
    polynomial_exact: bool

    def z0(self) -> list:
        """Z_a(0) as columns: returns a list of d vectors."""
        return [[z.const for z in za] for za in self.Z]

    def zp0(self) -> list:
        return [[z.const for z in za] for za in self.Zp]

    def matrix0(self) -> list:
        """M(0): rows are relations, columns are the Z_a(0)."""
        return exact.transpose(self.z0())


def _lift(a: MJet, order: int) -> MJet:
    """Reinterpret a polynomial jet at a higher truncation order."""
    return MJet(a.nvars, order, a.coeffs)


def relations_hold_identically(w: WebGerm, basis: Sequence[AbelianRelation]) -> bool:
    """True iff every relation holds as a polynomial identity for the
    polynomials written in the jets (no truncation)."""
    du = max(max(ua.degree() for ua in w.u), 1)
    df = max((max(len(fa.coeffs) for fa in rel.f) - 1 for rel in basis), default=0)
    top = df * du + du
    u = [_lift(ua, top + 1) for ua in w.u]
    for rel in basis:
        for i in range(w.n):
            acc = MJet.zero(w.n, top)
            for fa, ua in zip(rel.f, u):
                acc = acc + compose_u(UJet(top, fa.coeffs), ua.truncate(top)) * ua.ddx(i)
            if not acc.is_zero():
                return False
    return True


def build(w: WebGerm, rs: Optional[RelationSpace] = None, basis: Optional[Sequence[AbelianRelation]] = None) -> PoincareData:
    """Assemble Z_a, Z'_a from a valuation-graded basis of relations.

    ``basis`` overrides the graded choice (it must still consist of
    relations); it exists so corrupted bases can be probed.
    """
    if w.d < 2 * w.n:
        raise PreconditionError("Poincare construction needs d >= 2n")
    if rs is None:
        rs = abelian_relations_cached(w)
    l = 2 * w.d - 3 * w.n + 1
    if basis is None:
        cert = certify_max_rank_val1(w, rs)
        if not cert.verdict:
            raise PreconditionError("certificate absent")
        val0, val1 = graded_basis(rs)
        if len(val0) != w.d - w.n or len(val1) != w.d - 2 * w.n + 1:
            raise PreconditionError("certificate absent")
        basis = val0 + val1
        nv0, nv1 = len(val0), len(val1)
    else:
        basis = tuple(basis)
        if len(basis) != l:
            raise PreconditionError(f"need exactly {l} relations")
        nv0 = sum(1 for r in basis if r.valuation == 0)
        nv1 = len(basis) - nv0
    eq43 = all(all(c.is_zero() for c in relation_residual(w, rel)) for rel in basis)
    if not eq43:
        raise ArithmeticError("Poincare vectors violate sum Z_a du_a = 0")
    order = w.order - 2
    Z, Zp = [], []
    for a, ua in enumerate(w.u):
        ut = ua.truncate(order)
        Z.append(tuple(compose_u(rel.f[a], ut) for rel in basis))
        Zp.append(tuple(compose_u(rel.f[a].deriv(), ut.truncate(order - 1)) if order >= 1 else MJet.zero(w.n, 0) for rel in basis))
    return PoincareData(
        web=w,
        l=l,
        m=l - 1,
        order=order,
        basis=tuple(basis),
        n_val0=nv0,
        n_val1=nv1,
        Z=tuple(Z),
        Zp=tuple(Zp),
        eq43_exact=eq43,
        polynomial_exact=relations_hold_identically(w, basis),
    )


def abelian_relations_cached(w: WebGerm) -> RelationSpace:
    from .web import abelian_relations

    return abelian_relations(w)


# -- checks at the origin --------------------------------------------------------


@dataclass(frozen=True)
class PositionReport:
    span_dim: int
    expected_span: int
    subsets_checked: int
    subsets_full: int
    completions_checked: int
    completions_full: int
    block_shape: bool
    verdict: bool


def position_checks(pd: PoincareData) -> PositionReport:
    """General position of the Z_a(0) in their span and completion by Z'_a(0)."""
    w = pd.web
    n, d = w.n, w.d
    z0, zp0 = pd.z0(), pd.zp0()
    span = exact.rank(z0)
    k0 = d - n
    subs = list(combinations(range(d), k0))
    full = sum(1 for s in subs if exact.rank([z0[a] for a in s]) == k0)
    k1 = d - 2 * n + 1
    comps = list(combinations(range(d), k1))
    full1 = sum(1 for s in comps if exact.rank(z0 + [zp0[a] for a in s]) == pd.l)
    m0 = pd.matrix0()
    block = all(all(v == 0 for v in m0[i]) for i in range(pd.n_val0, pd.l)) and exact.rank(m0[: pd.n_val0]) == pd.n_val0
    ok = span == k0 and full == len(subs) and full1 == len(comps) and block
    return PositionReport(span, k0, len(subs), full, len(comps), full1, block, ok)


# -- local data at a point x -------------------------------------------------------


def recenter(w: WebGerm, x: Sequence, order: Optional[int] = None) -> WebGerm:
    """The web y -> u_a(x + y) - u_a(x), with the jets read as polynomials."""
    order = w.order if order is None else order
    x = [rat(v) for v in x]
    u = []
    for ua in w.u:
        shifted = ua.shift(x)
        u.append((shifted - shifted.const).truncate(order))
    return WebGerm(w.n, w.d, order, tuple(u))


@dataclass(frozen=True)
class LocalData:
    """Values and first derivatives at a point x (jets of order 1 in y = x' - x)."""

    x: tuple
    u: tuple
    k: tuple
    theta: tuple
    a: tuple
    Z: tuple

    def z_values(self) -> list:
        return [[z.const for z in za] for za in self.Z]


def z_at(pd: PoincareData, x: Sequence) -> list:
    """Z_a(x) by direct polynomial evaluation."""
    x = [rat(v) for v in x]
    out = []
    for a, ua in enumerate(pd.web.u):
        s = ua.evaluate(x)
        out.append([upoly.evaluate(rel.f[a].coeffs, s) for rel in pd.basis])
    return out


def local_data(pd: PoincareData, cf: AdaptedCoframe, x: Sequence) -> LocalData:
    """Coframe, k, theta and Z near x from the web re-expanded at x.

    The construction of the coframe is pointwise algebraic in the
    gradients, so running it on the re-expanded web with the same gauge
    shift yields the values (and derivatives) of the original fields at x.
    """
    x = tuple(rat(v) for v in x)
    w = pd.web
    local = recenter(w, x, 2)
    lcf = adapted_coframe(local, shift=cf.shift)
    values = [ua.evaluate(x) for ua in w.u]
    Z = []
    for a, ua in enumerate(local.u):
        ut = ua.truncate(1)
        row = []
        for rel in pd.basis:
            f = rel.f[a]
            shifted = upoly.shift(f.coeffs, values[a])
            row.append(compose_u(UJet(1, tuple(shifted[:2])), ut))
        Z.append(tuple(row))
    return LocalData(x=x, u=tuple(values), k=lcf.k, theta=lcf.theta, a=lcf.a, Z=tuple(Z))


# -- span intersections --------------------------------------------------------------


def span_intersection_dim(pd: PoincareData, x: Sequence, xp: Sequence) -> int:
    """Linear dimension of span{Z_a(x)} & span{Z_a(x')}."""
    from .projective import intersection_basis

    return len(intersection_basis(z_at(pd, x), z_at(pd, xp)))


def immersion_rank(pd: PoincareData, x: Sequence, v: Sequence) -> int:
    """Rank of the Z_a(x) together with their derivatives along v."""
    x = [rat(c) for c in x]
    v = [rat(c) for c in v]
    rows = z_at(pd, x)
    for a, ua in enumerate(pd.web.u):
        s = ua.evaluate(x)
        slope = sum((vi * g.evaluate(x) for vi, g in zip(v, ua.gradient())), Fraction(0))
        rows.append([slope * upoly.evaluate(upoly.deriv(rel.f[a].coeffs), s) for rel in pd.basis])
    return exact.rank(rows)


# -- the curve field ------------------------------------------------------------------


def poly_from_roots(roots: Sequence, one) -> list:
    """Ascending coefficients of prod (t - r) over any commutative ring."""
    poly = [one]
    zero = one - one
    for r in roots:
        nxt = [zero] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * r
        poly = nxt
    return poly


def _vzero(size: int, zero) -> list:
    return [zero] * size


def curve_coefficients(k: Sequence, theta: Sequence, Z: Sequence, one) -> tuple:
    """Coefficients C_0..C_{d-1} of Z*(t) and the tables sigma_k, sigma_k(a)."""
    d = len(theta)
    zero = one - one
    l = len(Z[0])
    sigma = poly_from_roots(theta, one)
    sigma_a = [poly_from_roots([theta[b] for b in range(d) if b != a], one) for a in range(d)]
    coeffs = []
    for kk in range(d):
        vec = _vzero(l, zero)
        for a in range(d):
            w = sigma_a[a][kk] * k[a]
            vec = [v + w * z for v, z in zip(vec, Z[a])]
        coeffs.append(vec)
    return coeffs, sigma, sigma_a


@dataclass(frozen=True)
class CurveField:
    coeffs: tuple
    sigma: tuple
    sigma_a: tuple
    degree: int
    degree_bound: int
    degree_ok: bool
    sigma_ok: bool
    eq48_ok: bool
    cancellation_ok: bool
    incidence_ok: bool
    basis_ok: bool
    curve: Optional[RNC]
    parameters: tuple

    @property
    def ok(self) -> bool:
        return all((self.degree_ok, self.sigma_ok, self.eq48_ok, self.cancellation_ok, self.incidence_ok, self.basis_ok))


def _is_zero(v) -> bool:
    return v.is_zero() if isinstance(v, MJet) else v == 0


def curve_field(pd: PoincareData, cf: AdaptedCoframe, strict: bool = True) -> CurveField:
    """Expand Z*(x, t) with jet coefficients and verify its structure at 0."""
    w = pd.web
    n, d = w.n, w.d
    order = pd.order
    k = [x.truncate(order) for x in cf.k]
    theta = [x.truncate(order) for x in cf.theta]
    Z = [list(za) for za in pd.Z]
    one = MJet.constant(1, n, order)
    zero = MJet.zero(n, order)
    coeffs, sigma, sigma_a = curve_coefficients(k, theta, Z, one)
    bound = d - n - 1
    degree = max((kk for kk, vec in enumerate(coeffs) if not all(_is_zero(c) for c in vec)), default=-1)

    sigma_ok = all(
        (sigma[kk + 1] - (sigma_a[a][kk] - theta[a] * (sigma_a[a][kk + 1] if kk + 1 < d else zero))).is_zero()
        for a in range(d)
        for kk in range(d)
    )
    # S_l = sum_a theta_a^l k_a Z_a; the first n vanish by the relation identity
    S = []
    for lev in range(d):
        vec = _vzero(pd.l, zero)
        for a in range(d):
            w_ = theta[a] ** lev * k[a]
            vec = [v + w_ * z for v, z in zip(vec, Z[a])]
        S.append(vec)
    eq48_ok = all(all(c.is_zero() for c in S[mu]) for mu in range(n))
    cancellation_ok = True
    for kk in range(d):
        vec = _vzero(pd.l, zero)
        for lev in range(d - kk):
            vec = [v + sigma[kk + lev + 1] * s for v, s in zip(vec, S[lev])]
        if not all((v - c).is_zero() for v, c in zip(vec, coeffs[kk])):
            cancellation_ok = False

    # values at the origin
    z0 = pd.z0()
    th0 = [t.const for t in theta]
    c0 = [[c.const for c in vec] for vec in coeffs]

    def value(t):
        return [sum((c0[kk][i] * t ** kk for kk in range(d)), Fraction(0)) for i in range(pd.l)]

    incidence_ok = all(exact.proportional(value(th0[a]), z0[a]) for a in range(d))
    span = exact.span_basis(z0)
    curve = None
    params = ()
    basis_ok = False
    if degree <= bound and len(span) == d - n:
        # coordinates of the coefficient vectors in the rref basis of the span
        st = exact.transpose(span)
        coords = []
        for kk in range(bound + 1):
            sol = exact.solve(st, c0[kk])
            coords.append(sol)
        if all(c is not None for c in coords):
            rows = [[coords[kk][j] for kk in range(bound + 1)] for j in range(d - n)]
            basis_ok = exact.det(rows) != 0 if rows else False
            if basis_ok:
                curve = RNC(bound, tuple(tuple(r) for r in rows))
                pts = [exact.solve(st, z0[a]) for a in range(d)]
                params = tuple(point_on_rnc(curve, p) for p in pts)
                incidence_ok = incidence_ok and all(p is not None for p in params)
    result = CurveField(
        coeffs=tuple(tuple(v) for v in coeffs),
        sigma=tuple(sigma),
        sigma_a=tuple(tuple(s) for s in sigma_a),
        degree=degree,
        degree_bound=bound,
        degree_ok=degree <= bound,
        sigma_ok=sigma_ok,
        eq48_ok=eq48_ok,
        cancellation_ok=cancellation_ok,
        incidence_ok=incidence_ok,
        basis_ok=basis_ok,
        curve=curve,
        parameters=params,
    )
    if strict and not result.ok:
        failed = [name for name in ("degree_ok", "sigma_ok", "eq48_ok", "cancellation_ok", "incidence_ok", "basis_ok") if not getattr(result, name)]
        raise ArithmeticError("curve field inconsistent: " + ", ".join(failed) + f" (degree {degree}, bound {bound})")
    return result


def curve_at(pd: PoincareData, ld: LocalData) -> tuple:
    """Value coefficients of Z*(x, .) at the point of ``ld`` and their x-derivatives.

    Returns (coefficients, derivative coefficients) where the latter is
    indexed [i][k] for d/dx_i of the t^k coefficient.
    """
    n = pd.web.n
    one = MJet.constant(1, n, 1)
    k = [x.truncate(1) for x in ld.k]
    theta = [x.truncate(1) for x in ld.theta]
    coeffs, _, _ = curve_coefficients(k, theta, [list(z) for z in ld.Z], one)
    vals = [[c.const for c in vec] for vec in coeffs]
    ders = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        e = tuple(e)
        ders.append([[c.coefficient(e) for c in vec] for vec in coeffs])
    return vals, ders


def _eval_vec_poly(coeffs: Sequence[Sequence], t) -> list:
    size = len(coeffs[0])
    return [sum((coeffs[kk][i] * t ** kk for kk in range(len(coeffs))), Fraction(0)) for i in range(size)]


def _trim_vec_poly(coeffs: list) -> list:
    out = list(coeffs)
    while out and all(c == 0 for c in out[-1]):
        out.pop()
    return out


# -- intersections of curves -----------------------------------------------------------


@dataclass(frozen=True)
class IntersectionReport:
    identical: bool
    finite: int
    at_infinity: int
    count: int
    common_parameters: tuple


def _vec_poly_components(coeffs: Sequence[Sequence]) -> list:
    """Turn a list of vector coefficients into one polynomial per coordinate."""
    size = len(coeffs[0])
    return [upoly.trim([coeffs[kk][i] for kk in range(len(coeffs))]) for i in range(size)]


def curve_intersections(pd: PoincareData, cf: AdaptedCoframe, x: Sequence, xp: Sequence) -> IntersectionReport:
    """Common points of C(x) and C(x') with multiplicity.

    Points of C(x) are v(t) = Z*(x, t).  They lie on C(x') when v(t) is in
    the span of C(x') and its coordinates w(t) in the basis of coefficient
    vectors of Z*(x', .) satisfy the 2x2 minor equations of the moment
    curve.  The count is the degree of the gcd of all these polynomials plus
    the multiplicity of the common root at t = infinity.
    """
    x = [rat(v) for v in x]
    xp = [rat(v) for v in xp]
    e = pd.web.d - pd.web.n - 1
    va, _ = curve_at(pd, local_data(pd, cf, x))
    vb, _ = curve_at(pd, local_data(pd, cf, xp))
    va = va[: e + 1]
    vb = vb[: e + 1]
    if x == xp:
        return IntersectionReport(True, 0, 0, 0, ())
    l = pd.l
    # annihilator of span(C(x'))
    ann = exact.kernel_basis(vb, l)
    comps = _vec_poly_components(va)
    conds = []  # (polynomial, nominal degree)
    for nu in ann:
        p: list = []
        for c, poly in zip(nu, comps):
            p = upoly.add(p, upoly.scale(poly, c))
        conds.append((p, e))
    # coordinates w(t) = D_sub^{-1} v_sub(t) on rows where the basis of C(x') is invertible
    bt = exact.transpose(vb)
    _, rows = exact.rref(vb)
    sub = [bt[r] for r in rows]
    inv = exact.inverse(sub)
    wpolys = []
    for j in range(e + 1):
        p: list = []
        for c, r in zip(inv[j], rows):
            p = upoly.add(p, upoly.scale(comps[r], c))
        wpolys.append(p)
    for i in range(e):
        for j in range(i + 1, e):
            minor = upoly.sub(upoly.mul(wpolys[i], wpolys[j + 1]), upoly.mul(wpolys[i + 1], wpolys[j]))
            conds.append((minor, 2 * e))
    if all(not p for p, _ in conds):
        return IntersectionReport(True, 0, 0, 0, ())
    g = upoly.gcd_many([p for p, _ in conds])
    finite = upoly.degree(g) if g else 0
    at_inf = min(nom - upoly.degree(p) if p else nom + 1 for p, nom in conds)
    at_inf = min(at_inf, e)
    from .generators import rational_roots

    roots = tuple(sorted(rational_roots(g))) if finite > 0 else ()
    return IntersectionReport(False, finite, at_inf, finite + at_inf, roots)


def polynomial_inverse(maps: Sequence[MJet]) -> Optional[list]:
    """Exact polynomial inverse of a polynomial map fixing 0, if its
    truncated inverse happens to be one."""
    n = len(maps)
    order = maps[0].order
    inv = invert_map(list(maps))
    deg = max(m.degree() for m in maps) * max(v.degree() for v in inv)
    big = max(deg, order)
    lifted = [_lift(m, big) for m in maps]
    inv_l = [_lift(v, big) for v in inv]
    if compose_map(lifted, inv_l) != identity_map(n, big) or compose_map(inv_l, lifted) != identity_map(n, big):
        return None
    return inv


def compose_map(phi: Sequence[MJet], psi: Sequence[MJet]) -> list:
    return [compose(c, psi) for c in phi]


def leaf_sharing_partner(pd: PoincareData, x: Sequence, s) -> Optional[list]:
    """x' with u_a(x') = u_a(x) for a = 1..n-1 and u_n(x') = u_n(x) + s."""
    w = pd.web
    n = w.n
    x = [rat(v) for v in x]
    inv = polynomial_inverse(list(w.u[:n]))
    if inv is None:
        return None
    target = [w.u[a].evaluate(x) for a in range(n)]
    target[n - 1] += rat(s)
    return [v.evaluate(target) for v in inv]


# -- tangent span --------------------------------------------------------------------


@dataclass(frozen=True)
class TangentReport:
    x: tuple
    t: Fraction
    rank: int
    kernel_members: bool
    transverse_jump: tuple


def tangent_span(pd: PoincareData, cf: AdaptedCoframe, x: Sequence, t, ld: Optional[LocalData] = None) -> TangentReport:
    """Rank of {Z*, d_t Z*, d_x0 Z*, ...} at (x, t) and the decomposition test."""
    n = pd.web.n
    t = rat(t)
    if ld is None:
        ld = local_data(pd, cf, x)
    vals, ders = curve_at(pd, ld)
    zs = _eval_vec_poly(vals, t)
    dt = _eval_vec_poly([[kk * c for c in vals[kk]] for kk in range(1, len(vals))], t) if len(vals) > 1 else [Fraction(0)] * pd.l
    dx = [_eval_vec_poly(ders[i], t) for i in range(n)]
    rank = exact.rank([zs, dt] + dx)
    # Omega(x, t) = sum_mu t^mu omega_mu(x)
    a0 = [[c.const for c in row] for row in ld.a]
    omega = [sum((t ** mu * a0[mu][lam] for mu in range(n)), Fraction(0)) for lam in range(n)]
    kernel = exact.kernel_basis([omega], n)
    members = True
    for v in kernel:
        dv = [sum((vi * dx[i][c] for i, vi in enumerate(v)), Fraction(0)) for c in range(pd.l)]
        if not exact.in_span(dv, [zs, dt]):
            members = False
    lam = next(i for i, c in enumerate(omega) if c != 0)
    zvals = ld.z_values()
    before = exact.rank(zvals)
    after = exact.rank(zvals + [dx[lam]])
    return TangentReport(tuple(ld.x), t, rank, members, (before, after))


def corrupt_basis(pd: PoincareData) -> list:
    """A rank-deficient relation basis: the last relation is replaced by a copy
    of the first valuation-1 relation (or the first one)."""
    basis = list(pd.basis)
    src = basis[pd.n_val0] if pd.n_val1 > 1 else basis[0]
    basis[-1] = src
    return basis


def corrupt_valuation_one(pd: PoincareData, seed: int = 0) -> PoincareData:
    """Perturb Z_a for a > n+... in the valuation-1 rows so the identity
    sum Z_a k_a theta_a^mu = 0 breaks (curve-field soundness probe)."""
    Z = [list(za) for za in pd.Z]
    row = pd.l - 1
    Z[0][row] = Z[0][row] + MJet.constant(1, pd.web.n, pd.order)
    return replace(pd, Z=tuple(tuple(z) for z in Z))
