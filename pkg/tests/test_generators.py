from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest

from webalg import exact, upoly, web
from webalg import generators as gen
from webalg.errors import ParseError, PreconditionError
from webalg.jets import MJet, compose_maps, identity_map, invert_map


def test_rnc_web_forms_in_general_position():
    w = gen.rnc_linear_web(3, 7, [Fraction(t, 2) for t in range(7)], 4)
    forms = w.linear_forms()
    for s in combinations(range(7), 3):
        # Vandermonde minors are products of differences
        assert exact.det([forms[a] for a in s]) != 0
    with pytest.raises(PreconditionError, match="repeated theta"):
        gen.rnc_linear_web(2, 3, [0, 1, 1], 3)


def test_family_has_d_minus_n_relations():
    U = gen.random_family_U(4, 6, seed=0)
    w = gen.separable_family_web(4, 6, U, 4)
    rs = web.abelian_relations(w)
    assert rs.dim == 2 == web.chern_bound(4, 6)
    assert not w.is_linear()


def test_pushforward_linear_map_keeps_rank():
    w = gen.rnc_linear_web(3, 7, range(7), 4)
    lin = [MJet.linear(row, 4) for row in ([1, 1, 0], [0, 1, 2], [1, 0, 1])]
    pw = gen.pushforward(w, lin)
    assert pw.is_linear()
    assert web.abelian_relations(pw).filtration == web.abelian_relations(w).filtration


def test_pushforward_quadratic_map_certifies():
    w = gen.rnc_linear_web(3, 7, range(7), 5)
    pw = gen.pushforward(w, gen.random_quadratic_diffeo(3, 5, seed=3))
    assert not pw.is_linear()
    assert web.certify_max_rank_val1(pw).verdict


def test_maps_are_invertible():
    for phi in (gen.random_quadratic_diffeo(3, 4, 1), gen.triangular_quadratic_map(3, 4, 1)):
        assert exact.det(exact.to_matrix([c.linear_part() for c in phi])) == 1
        assert compose_maps(phi, invert_map(phi)) == identity_map(3, 4)


def moment_curve(n):
    return gen.CurveParam(n, n, tuple([Fraction(0)] * i + [Fraction(1)] for i in range(n + 1)))


def test_algebraic_web_from_moment_curve():
    c = moment_curve(3)
    x0 = upoly.from_roots([1, 2, 3])
    w = gen.algebraic_web(c, x0, 4)
    assert web.abelian_relations(w).dim == 0 == web.chern_bound(3, 3)
    assert web.forms_in_general_position(w.linear_forms())


def test_algebraic_web_leaf_property():
    # du_a(0) is proportional to gamma(t_a) read in the chart coordinates
    c = gen.curve_with_section(3, [1, 2, 3, 4, 5], seed=0)
    w = gen.algebraic_web(c, [1, 0, 0, 0], 3)
    for ta, ua in zip([1, 2, 3, 4, 5], w.u):
        point = [upoly.evaluate(c.components[i], ta) for i in (1, 2, 3)]
        assert exact.proportional(ua.linear_part(), point)
    with pytest.raises(PreconditionError, match="not admissible"):
        gen.algebraic_web(c, [0, 0, 0, 0], 3)


def test_text_forms_roundtrip():
    phi = gen.triangular_quadratic_map(3, 4, 2)
    assert gen.parse_map(gen.format_map(phi)) == phi
    c = gen.curve_with_section(2, [0, 1, 2], seed=1)
    assert gen.parse_curve(gen.format_curve(c)) == c
    with pytest.raises(ParseError):
        gen.parse_map("map n=2 J=3\nphi 0:\n[1 0] 1\n")
    with pytest.raises(ParseError):
        gen.parse_curve("curve n=2\n")


def test_rational_roots():
    assert gen.rational_roots(upoly.from_roots([Fraction(1, 2), 3, 3])) == {Fraction(1, 2): 1, Fraction(3): 2}
