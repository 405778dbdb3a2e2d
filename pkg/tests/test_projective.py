from __future__ import annotations

import random
from fractions import Fraction

import pytest

from webalg import projective as pj
from webalg.errors import ParseError


def moment_points(m, ts):
    return [[Fraction(t) ** k for k in range(m + 1)] for t in ts]


def random_points(rng, m, count):
    return [[Fraction(rng.randint(-9, 9)) for _ in range(m + 1)] for _ in range(count)]


def test_curve_through_standard_frame():
    pts = [[int(i == j) for j in range(4)] for i in range(4)] + [[1, 1, 1, 1], [1, 2, 4, 8]]
    curve = pj.rnc_through(pts)
    params = [pj.point_on_rnc(curve, p) for p in pts]
    assert params == [1, Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), pj.INF, 0]


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_curve_through_moment_points(m):
    pts = moment_points(m, [Fraction(t, 3) for t in range(-1, m + 2)])
    assert pj.same_curve(pj.rnc_through(pts), pj.RNC.moment(m))


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_castelnuovo_recovers_moment_curve(m):
    pts = moment_points(m, range(2 * m + 3))
    curve = pj.castelnuovo_recover(pts)
    assert pj.same_curve(curve, pj.RNC.moment(m))
    assert all(pj.point_on_rnc(curve, p) is not None for p in pts)


def test_castelnuovo_rejects_random_points():
    rng = random.Random(0)
    pts = random_points(rng, 3, 9)
    assert pj.quadric_conditions(pts).codim == 9
    with pytest.raises(ValueError, match="Castelnuovo hypothesis fails"):
        pj.castelnuovo_recover(pts)


def test_quadric_condition_counts():
    rng = random.Random(1)
    m = 3
    for d in range(1, 2 * m + 2):
        assert pj.quadric_conditions(random_points(rng, m, d)).codim == d
    for d in range(2 * m + 1, 2 * m + 6):
        assert pj.quadric_conditions(moment_points(m, range(d))).codim == 2 * m + 1


def test_general_position_rejection():
    pts = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 2, 3]]
    assert not pj.general_position(pts)
    with pytest.raises(ValueError, match="not in general position"):
        pj.rnc_through(pts)


def test_hyperplane_section_roots():
    curve = pj.RNC.moment(3)
    section = pj.hyperplane_section(curve, [6, -11, 6, -1])
    assert sorted(pj.point_on_rnc(curve, curve.point(t)) for t in (1, 2, 3)) == [1, 2, 3]
    from webalg import upoly

    assert [upoly.evaluate(section, t) for t in (1, 2, 3)] == [0, 0, 0]


def test_span_intersections():
    a = [[1, 0, 0, 0], [0, 1, 0, 0]]
    b = [[0, 1, 0, 0], [0, 0, 1, 0]]
    # projective dimensions: a line and a line meeting in a point of P^3
    assert pj.span_dim(a + b) == 2
    assert pj.intersect_spans(a, b) == 0
    assert pj.intersect_spans(a, [[0, 0, 0, 1]]) == -1


def test_text_roundtrip():
    curve = pj.RNC.moment(2)
    assert pj.same_curve(pj.parse_rnc(pj.format_rnc(curve)), curve)
    pts = moment_points(2, range(4))
    assert [pj.coords(p) for p in pj.parse_points(pj.format_points(pts))] == [pj.coords(p) for p in pts]
    with pytest.raises(ParseError):
        pj.parse_points("1 2 x\n")
