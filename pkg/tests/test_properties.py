from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from webalg import exact, projective, upoly, web
from webalg.jets import MJet, compose_maps, identity_map, invert_map

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def jets(nvars, order, const=None):
    monos = [e for q in range(order + 1) for e in web.monomials(nvars, q)]

    def build(values):
        coeffs = dict(zip(monos, values))
        if const is not None:
            coeffs[(0,) * nvars] = Fraction(const)
        return MJet(nvars, order, coeffs)

    return st.lists(rationals, min_size=len(monos), max_size=len(monos)).map(build)


@settings(max_examples=40, deadline=None)
@given(jets(2, 3), jets(2, 3), jets(2, 3))
def test_jet_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(jets(2, 3), st.lists(rationals, min_size=2, max_size=2), st.lists(rationals, min_size=2, max_size=2))
def test_jet_evaluation_is_a_ring_map(a, p, q):
    b = a.shift(p)
    assert b.evaluate(q) == a.evaluate([x + y for x, y in zip(p, q)])


@settings(max_examples=25, deadline=None)
@given(jets(2, 3, const=0), jets(2, 3, const=0))
def test_inverse_map_roundtrip(f, g):
    phi = [MJet.variable(0, 2, 3) + f - MJet.linear(f.linear_part(), 3), MJet.variable(1, 2, 3) + g - MJet.linear(g.linear_part(), 3)]
    assert compose_maps(phi, invert_map(phi)) == identity_map(2, 3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(rationals, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_nullity(rows):
    assert exact.rank(rows) + len(exact.kernel_basis(rows, 4)) == 4


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, max_size=5), st.lists(rationals, min_size=1, max_size=4).filter(lambda p: upoly.trim(p) != []))
def test_poly_division(a, b):
    q, r = upoly.divmod_poly(a, b)
    assert upoly.add(upoly.mul(q, b), r) == upoly.trim(a)
    assert upoly.degree(r) < upoly.degree(b)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10_000))
def test_power_rank_inequalities(n, seed):
    import random

    rng = random.Random(seed)
    d = rng.randint(n + 1, 2 * n + 3)
    forms = [[Fraction(rng.randint(-9, 9)) for _ in range(n)] for _ in range(d)]
    if not web.forms_in_general_position(forms):
        return
    r = [web.power_rank(forms, q) for q in range(d + 1)]
    for q in range(d):
        assert r[q + 1] >= min(d, r[q] + n - 1)
        assert r[q] >= min(d, q * (n - 1) + 1)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=6, max_size=6, unique=True))
def test_curve_through_moment_points(ts):
    pts = [[Fraction(t) ** k for k in range(4)] for t in ts]
    assert projective.same_curve(projective.rnc_through(pts), projective.RNC.moment(3))
