"""Adapted coframes and the second-order conditions at jet level.

For a web whose gradient points lie on a rational normal curve of degree
n-1, there are 1-forms omega_0..omega_{n-1} with
du_a = k_a * sum_mu theta_a^mu omega_mu.  The coframe is obtained by running
the curve-through-(m+3)-points construction on the gradients of u_1..u_{n+2}
with every quantity a jet.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .errors import PreconditionError
from .jets import MJet, jet_matrix_inverse
from .projective import normalized_rnc_data, quadric_conditions
from .web import WebGerm


def jet_poly_from_roots(roots: Sequence[MJet], lead: MJet) -> list:
    """Ascending coefficients of lead * prod (t - r) with jet coefficients."""
    poly = [lead]
    for r in roots:
        nxt = [MJet.zero(lead.nvars, lead.order) for _ in range(len(poly) + 1)]
        for i, c in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * r
        poly = nxt
    return poly


def gauge_matrix(m: int, shift: int) -> list:
    """Coefficient change for t = s/(1 - c s) on degree-m homogeneous curves.

    Row nu gives the weights of the old coefficients a_mu in the new one.
    """
    return [[Fraction(comb(m - mu, nu - mu) * (-shift) ** (nu - mu)) if mu <= nu else Fraction(0) for mu in range(m + 1)] for nu in range(m + 1)]


@dataclass(frozen=True)
class AdaptedCoframe:
    n: int
    d: int
    order: int
    a: tuple
    b: tuple
    k: tuple
    theta: tuple
    shift: int

    def omega(self, mu: int) -> tuple:
        """Coefficients of omega_mu on dx_0..dx_{n-1}."""
        return self.a[mu]


def _vec(jets: Sequence[MJet], matrix, v: Sequence[MJet]) -> list:
    out = []
    for row in matrix:
        acc = MJet.zero(jets[0].nvars, jets[0].order)
        for c, x in zip(row, v):
            acc = acc + c * x
        out.append(acc)
    return out


def _frame(grads: list, n: int, shift: int) -> tuple:
    """Coframe rows a_nu, inverse b and components c_a for one gauge shift."""
    m = n - 1
    g = [[grads[j][i] for j in range(n)] for i in range(n)]
    ginv = jet_matrix_inverse(g)
    xp = _vec(grads[0], ginv, grads[n])
    xpp = _vec(grads[0], ginv, grads[n + 1])
    if any(v.const == 0 for v in xp) or any(v.const == 0 for v in xpp):
        raise ValueError("gradient points are not in general position")
    k, theta = normalized_rnc_data(xp, xpp)
    if len({t.const for t in theta}) != n:
        raise ValueError("theta collision at the base point")
    one = MJet.constant(1, grads[0][0].nvars, grads[0][0].order)
    # normalized curve y_j(t) = k_j prod_{i != j} (t - theta_i)
    yhat = [jet_poly_from_roots([theta[i] for i in range(n) if i != j], k[j]) for j in range(n)]
    chat = [[yhat[j][mu] for j in range(n)] for mu in range(m + 1)]
    a = [_vec(grads[0], g, chat[mu]) for mu in range(m + 1)]
    gauge = gauge_matrix(m, shift)
    atil = []
    for nu in range(m + 1):
        row = [MJet.zero(one.nvars, one.order) for _ in range(n)]
        for mu in range(m + 1):
            if gauge[nu][mu]:
                row = [r + x.scale(gauge[nu][mu]) for r, x in zip(row, a[mu])]
        atil.append(row)
    b = jet_matrix_inverse(atil)
    comps = []
    for ga in grads:
        comps.append([sum((ga[lam] * b[lam][nu] for lam in range(n)), MJet.zero(one.nvars, one.order)) for nu in range(n)])
    return atil, b, comps


def adapted_coframe(w: WebGerm, shift: Optional[int] = None) -> AdaptedCoframe:
    """Coframe adapted to a web whose gradient points lie on a degree-(n-1) curve.

    The coframe is written in the original coordinates: inverting the matrix
    of gradients of u_1..u_n plays the role of taking u_1..u_n as
    coordinates.  The parameter is shifted by t = s/(1 - c s) with the
    smallest positive integer c keeping every k_a a unit, because the
    construction puts the gradient of u_{n+1} at t = infinity.
    """
    n, d = w.n, w.d
    if d < 2 * n + 1:
        raise PreconditionError("adapted coframe needs d >= 2n+1")
    if w.order < 2:
        raise PreconditionError("adapted coframe needs J >= 2")
    grads = [ua.gradient() for ua in w.u]
    base = [[g.const for g in ga] for ga in grads]
    if quadric_conditions(base).codim != 2 * n - 1:
        raise ValueError("web not of maximal rank type")
    if shift is None:
        consts = [[g.truncate(0) for g in ga] for ga in grads]
        shift = 1
        while True:
            _, _, comps0 = _frame(consts, n, shift)
            if all(c[0].const != 0 for c in comps0):
                break
            shift += 1
    atil, b, comps = _frame(grads, n, shift)
    if any(c[0].const == 0 for c in comps):
        raise ValueError("gauge shift leaves a gradient point at infinity")
    k = tuple(c[0] for c in comps)
    theta = tuple(c[1] / c[0] for c in comps)
    if len({t.const for t in theta}) != d:
        raise ValueError("theta collision at the base point")
    return AdaptedCoframe(
        n=n,
        d=d,
        order=w.order - 1,
        a=tuple(tuple(r) for r in atil),
        b=tuple(tuple(r) for r in b),
        k=k,
        theta=theta,
        shift=shift,
    )


@dataclass(frozen=True)
class CoframeResidual:
    order: int
    residuals: tuple
    exact: bool


def coframe_residual(w: WebGerm, cf: AdaptedCoframe, order: Optional[int] = None) -> CoframeResidual:
    """Per-a vectors du_a - k_a sum theta_a^mu omega_mu, modulo the given order."""
    order = cf.order if order is None else order
    out = []
    for ua, ka, ta in zip(w.u, cf.k, cf.theta):
        ka, ta = ka.truncate(order), ta.truncate(order)
        rows = [[x.truncate(order) for x in row] for row in cf.a]
        res = [g.truncate(order) for g in ua.gradient()]
        power = MJet.constant(1, w.n, order)
        for mu in range(w.n):
            coef = ka * power
            res = [r - coef * x for r, x in zip(res, rows[mu])]
            power = power * ta
        out.append(tuple(res))
    return CoframeResidual(order, tuple(out), all(r.is_zero() for vec in out for r in vec))


# -- second-order conditions --------------------------------------------------


@dataclass(frozen=True)
class SecondOrderData:
    order: int
    m: tuple
    nn: tuple
    residuals5: tuple
    residuals6: tuple

    @property
    def exact5(self) -> bool:
        return all(r.is_zero() for row in self.residuals5 for r in row)

    @property
    def exact6(self) -> bool:
        return all(r.is_zero() for row in self.residuals6 for r in row)


def coframe_component(grad: Sequence[MJet], b: Sequence[Sequence[MJet]], mu: int) -> MJet:
    """(phi)_mu for phi = sum_l grad[l] dx_l, using dx_l = sum b[l][nu] omega_nu."""
    order = grad[0].order
    return sum((g * b[lam][mu].truncate(order) for lam, g in enumerate(grad)), MJet.zero(grad[0].nvars, order))


def _solve_vandermonde(theta: Sequence[MJet], values: Sequence[MJet], size: int) -> list:
    rows = [[t ** lam for lam in range(size)] for t in theta[:size]]
    inv = jet_matrix_inverse(rows)
    return [sum((inv[i][j] * values[j] for j in range(size)), MJet.zero(theta[0].nvars, theta[0].order)) for i in range(size)]


def second_order_conditions(w: WebGerm, cf: AdaptedCoframe) -> SecondOrderData:
    """Solve and check both second-order conditions for every mu = 0..n-2.

    The unknown functions are determined by the first n (resp. n+1) indices,
    whose Vandermonde matrix in theta is invertible at 0; the residuals over
    all d indices are returned, never raised.
    """
    n, d = w.n, w.d
    if n < 2:
        raise PreconditionError("second-order conditions need n >= 2")
    order = cf.order - 1
    if order < 0:
        raise PreconditionError("truncation too small for second-order conditions")
    k = [x.truncate(order) for x in cf.k]
    theta = [x.truncate(order) for x in cf.theta]
    dk = [x.gradient() for x in cf.k]
    dtheta = [x.gradient() for x in cf.theta]
    dktheta = [(x * y).gradient() for x, y in zip(cf.k, cf.theta)]
    ms, ns, res5, res6 = [], [], [], []
    for mu in range(n - 1):
        lhs5 = [coframe_component(dktheta[a], cf.b, mu) - coframe_component(dk[a], cf.b, mu + 1) for a in range(d)]
        lhs6 = [theta[a] * coframe_component(dtheta[a], cf.b, mu) - coframe_component(dtheta[a], cf.b, mu + 1) for a in range(d)]
        m_mu = _solve_vandermonde(theta, [lhs5[a] / k[a] for a in range(d)], n)
        n_mu = _solve_vandermonde(theta, lhs6, n + 1)
        r5, r6 = [], []
        for a in range(d):
            powers = [theta[a] ** lam for lam in range(n + 1)]
            r5.append(lhs5[a] - k[a] * sum((x * p for x, p in zip(m_mu, powers)), MJet.zero(n, order)))
            r6.append(lhs6[a] - sum((x * p for x, p in zip(n_mu, powers)), MJet.zero(n, order)))
        ms.append(tuple(m_mu))
        ns.append(tuple(n_mu))
        res5.append(tuple(r5))
        res6.append(tuple(r6))
    return SecondOrderData(order, tuple(ms), tuple(ns), tuple(res5), tuple(res6))


def format_coframe(cf: AdaptedCoframe, residual: Optional[CoframeResidual] = None) -> str:
    from .jets import format_jet

    lines = [f"coframe n={cf.n} d={cf.d} J={cf.order} shift={cf.shift}"]
    for mu, row in enumerate(cf.a):
        for lam, x in enumerate(row):
            lines.append(f"a {mu} {lam}:")
            lines.extend(format_jet(x))
    for a, (ka, ta) in enumerate(zip(cf.k, cf.theta), 1):
        lines.append(f"k {a}:")
        lines.extend(format_jet(ka))
        lines.append(f"theta {a}:")
        lines.extend(format_jet(ta))
    if residual is not None:
        for a, vec in enumerate(residual.residuals, 1):
            lines.append(f"residual {a}: " + ("zero" if all(r.is_zero() for r in vec) else "nonzero"))
        lines.append("verdict " + ("exact" if residual.exact else "inexact"))
    return "\n".join(lines) + "\n"
