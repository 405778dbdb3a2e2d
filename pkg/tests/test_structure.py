from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest

from samples import certified_pushforward, perturbed_rnc_web
from webalg import generators as gen
from webalg import structure, web
from webalg.errors import PreconditionError
from webalg.jets import MJet
from webalg.projective import quadric_conditions


def test_linear_web_has_constant_coframe():
    w = gen.rnc_linear_web(3, 7, range(7), 4)
    cf = structure.adapted_coframe(w)
    for x in list(cf.k) + list(cf.theta) + [c for row in cf.a for c in row]:
        assert x.degree() <= 0
    assert len({t.const for t in cf.theta}) == 7
    assert structure.coframe_residual(w, cf).exact
    so = structure.second_order_conditions(w, cf)
    assert so.exact5 and so.exact6
    assert all(x.is_zero() for row in so.m for x in row)


@pytest.mark.parametrize("kind", ["triangular", "quadratic"])
def test_pushforward_coframe_is_exact(kind):
    w = certified_pushforward(2, 5, kind)
    cf = structure.adapted_coframe(w)
    # gradients move by a projectivity, so cross-ratios and theta stay fixed
    assert all(x.degree() <= 0 for x in cf.theta)
    assert any(x.degree() > 0 for x in list(cf.k) + [c for row in cf.a for c in row])
    assert structure.coframe_residual(w, cf).exact
    so = structure.second_order_conditions(w, cf)
    assert so.exact5 and so.exact6


def test_perturbed_multiplier_breaks_residual():
    w = certified_pushforward(1, 4)
    cf = structure.adapted_coframe(w)
    bad_k = list(cf.k)
    bad_k[3] = bad_k[3] + MJet.variable(0, 3, cf.order)
    res = structure.coframe_residual(w, replace(cf, k=tuple(bad_k)))
    assert not res.exact
    assert [all(c.is_zero() for c in v) for v in res.residuals] == [True, True, True, False, True, True, True]


def test_uncertified_web_fails_second_order_conditions():
    w = perturbed_rnc_web(3)
    assert not web.certify_max_rank_val1(w).verdict
    cf = structure.adapted_coframe(w)
    assert not structure.coframe_residual(w, cf).exact
    so = structure.second_order_conditions(w, cf)
    assert not (so.exact5 and so.exact6)


def test_gradient_curve_property():
    cases = [
        (certified_pushforward(1, 4), True),
        (gen.random_web(3, 7, 6, 0), False),
    ]
    for w, certified in cases:
        base = [[g.const for g in ua.gradient()] for ua in w.u]
        assert (quadric_conditions(base).codim == 2 * w.n - 1) == certified
        assert web.certify_max_rank_val1(w).verdict == certified


def test_coframe_preconditions():
    with pytest.raises(ValueError, match="not of maximal rank type"):
        structure.adapted_coframe(gen.random_web(3, 7, 4, 0))
    with pytest.raises(PreconditionError):
        structure.adapted_coframe(gen.rnc_linear_web(3, 6, range(6), 4))


def test_gauge_matrix_is_moebius_change():
    # a(s) = sum a_mu s^mu (1-cs)^(m-mu) for t = s/(1-cs)
    m, c = 3, 2
    T = structure.gauge_matrix(m, c)
    coeffs = [Fraction(1), Fraction(-2), Fraction(3), Fraction(5)]
    new = [sum((T[nu][mu] * coeffs[mu] for mu in range(m + 1)), Fraction(0)) for nu in range(m + 1)]
    for s in (Fraction(1, 3), Fraction(-2, 7)):
        t = s / (1 - c * s)
        lhs = sum(new[nu] * s ** nu for nu in range(m + 1))
        rhs = (1 - c * s) ** m * sum(coeffs[mu] * t ** mu for mu in range(m + 1))
        assert lhs == rhs
