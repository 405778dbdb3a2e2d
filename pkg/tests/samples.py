"""Test webs shared by several test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from webalg import generators as gen
from webalg import web
from webalg.jets import MJet


def perturbed_rnc_web(seed: int, order: int = 4) -> web.WebGerm:
    """rnc_linear_web(3, 7) with random quadratic and cubic terms added.

    Its gradient points at 0 still lie on a conic, so the coframe exists, but
    it carries no relation of valuation <= 1 beyond chance.
    """
    rng = random.Random(seed)
    base = gen.rnc_linear_web(3, 7, range(7), order)
    u = []
    for ua in base.u:
        coeffs = dict(ua.coeffs)
        for q in (2, 3):
            for e in web.monomials(3, q):
                coeffs[e] = Fraction(rng.randint(-3, 3))
        u.append(MJet(3, order, coeffs))
    return web.WebGerm(3, 7, order, tuple(u))


def certified_pushforward(seed: int = 1, order: int = 5, kind: str = "triangular") -> web.WebGerm:
    base = gen.rnc_linear_web(3, 7, range(7), order)
    if kind == "triangular":
        phi = gen.triangular_quadratic_map(3, order, seed)
    else:
        phi = gen.random_quadratic_diffeo(3, order, seed)
    return gen.pushforward(base, phi)
