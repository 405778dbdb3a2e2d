"""Constructors for example webs and test instances."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import exact, upoly
from .errors import ParseError, PreconditionError
from .exact import fmt_rat, rat
from .jets import MJet, UJet, compose, compose_u, format_jet, invert_map, newton_root, parse_jet
from .web import WebGerm, forms_in_general_position, monomials


def rnc_linear_web(n: int, d: int, theta: Sequence, order: int) -> WebGerm:
    """u_a(x) = sum_mu theta_a^mu x_mu: the linear web dual to a rational normal curve."""
    theta = [rat(t) for t in theta]
    if len(theta) != d:
        raise PreconditionError(f"need {d} parameters, got {len(theta)}")
    if len(set(theta)) != d:
        raise PreconditionError("repeated theta")
    return WebGerm(n, d, order, tuple(MJet.linear([t ** mu for mu in range(n)], order) for t in theta))


def separable_family_web(n: int, d: int, U: Sequence[Sequence[UJet]], order: int) -> WebGerm:
    """Coordinates, their sum, and d-n-1 separable functions sum_mu U[a][mu](x_mu).

    ``U`` has one row per extra function; each row holds n univariate jets
    without constant term.  Every such web carries d-n relations by
    construction.
    """
    if n < 3 or not n + 2 <= d <= 2 * n - 1:
        raise PreconditionError("family needs n >= 3 and n+2 <= d <= 2n-1")
    if len(U) != d - n - 1 or any(len(row) != n for row in U):
        raise PreconditionError(f"need {d - n - 1} rows of {n} univariate jets")
    xs = [MJet.variable(mu, n, order) for mu in range(n)]
    u = list(xs)
    u.append(sum(xs[1:], xs[0]))
    for row in U:
        acc = MJet.zero(n, order)
        for mu, g in enumerate(row):
            if g.coeffs[0] != 0:
                raise PreconditionError("separable components must vanish at 0")
            acc = acc + compose_u(UJet(order, g.coeffs), xs[mu])
        u.append(acc)
    return WebGerm(n, d, order, tuple(u))


# name used by the build contract
family_web_1_5 = separable_family_web


def random_family_U(n: int, d: int, seed: int, degree: int = 2) -> list:
    """Generic separable components of the given degree with admissible linear parts."""
    rng = random.Random(seed)
    base = [[Fraction(int(mu == i)) for mu in range(n)] for i in range(n)] + [[Fraction(1)] * n]
    for _ in range(1000):
        rows = []
        lin = []
        for _a in range(d - n - 1):
            row = []
            lrow = []
            for _mu in range(n):
                c1 = Fraction(rng.choice([v for v in range(-5, 6) if v]))
                higher = [Fraction(rng.randint(-5, 5)) for _ in range(degree - 1)]
                row.append(UJet(degree, (Fraction(0), c1, *higher)))
                lrow.append(c1)
            rows.append(row)
            lin.append(lrow)
        if forms_in_general_position(base + lin):
            return rows
    raise RuntimeError("could not draw admissible separable components")


def pushforward(w: WebGerm, phi: Sequence[MJet]) -> WebGerm:
    """The web with defining jets u_a o phi^{-1}."""
    if len(phi) != w.n or any(c.nvars != w.n for c in phi):
        raise PreconditionError("map dimension does not match the web")
    if any(c.order < w.order for c in phi):
        raise PreconditionError("map order is below the web order")
    phi = [c.truncate(w.order) for c in phi]
    try:
        psi = invert_map(phi)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc
    return WebGerm(w.n, w.d, w.order, tuple(compose(ua, psi) for ua in w.u))


def _unitriangular_product(n: int, rng: random.Random, spread: int) -> list:
    low = [[Fraction(1 if i == j else (rng.randint(-spread, spread) if i > j else 0)) for j in range(n)] for i in range(n)]
    up = [[Fraction(1 if i == j else (rng.randint(-spread, spread) if i < j else 0)) for j in range(n)] for i in range(n)]
    return exact.mat_mul(low, up)


def random_quadratic_diffeo(n: int, order: int, seed: int, spread: int = 2) -> list:
    """phi(x) = L x + q(x) with det L = 1 and a random quadratic part."""
    rng = random.Random(seed)
    lin = _unitriangular_product(n, rng, 1)
    out = []
    for i in range(n):
        coeffs = {}
        for j in range(n):
            e = [0] * n
            e[j] = 1
            coeffs[tuple(e)] = lin[i][j]
        for e in monomials(n, 2):
            coeffs[e] = rng.randint(-spread, spread)
        out.append(MJet(n, order, coeffs))
    return out


def triangular_quadratic_map(n: int, order: int, seed: int, spread: int = 2) -> list:
    """phi_i(x) = x_i + q_i(x_0, ..., x_{i-1}) with q_i quadratic.

    Its inverse is polynomial of degree 2^(n-1), so webs pushed forward by
    it stay polynomial and can be evaluated exactly away from 0.
    """
    rng = random.Random(seed)
    out = []
    for i in range(n):
        coeffs = {}
        e = [0] * n
        e[i] = 1
        coeffs[tuple(e)] = 1
        for mono in monomials(i, 2) if i else []:
            coeffs[tuple(mono) + (0,) * (n - i)] = rng.randint(-spread, spread)
        out.append(MJet(n, order, coeffs))
    return out


def random_web(n: int, d: int, order: int, seed: int, spread: int = 3) -> WebGerm:
    """A web with random coefficients in every degree 1..J."""
    rng = random.Random(seed)
    for _ in range(1000):
        u = []
        for _a in range(d):
            coeffs = {}
            for q in range(1, order + 1):
                for e in monomials(n, q):
                    coeffs[e] = rng.randint(-spread, spread)
            u.append(MJet(n, order, coeffs))
        if forms_in_general_position([ua.linear_part() for ua in u]):
            return WebGerm(n, d, order, tuple(u))
    raise RuntimeError("could not draw a web in general position")


# -- webs from curves ----------------------------------------------------------


@dataclass(frozen=True)
class CurveParam:
    """Rational curve t -> (gamma_0(t) : ... : gamma_n(t)) of degree d."""

    n: int
    d: int
    components: tuple

    def __post_init__(self):
        comps = tuple(tuple(upoly.trim(c)) for c in self.components)
        if len(comps) != self.n + 1:
            raise PreconditionError(f"need {self.n + 1} components")
        if max(upoly.degree(c) for c in comps) != self.d:
            raise PreconditionError(f"components do not have degree {self.d}")
        rows = [list(c) + [Fraction(0)] * (self.d + 1 - len(c)) for c in comps]
        if exact.rank(rows) != self.n + 1:
            raise PreconditionError("curve lies in a hyperplane")
        object.__setattr__(self, "components", comps)


def rational_roots(p: Sequence) -> dict:
    """Rational roots of p with multiplicities."""
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(upoly.trim(p))], t, domain="QQ")
    return {Fraction(int(r.p), int(r.q)): int(k) for r, k in poly.ground_roots().items()}


def algebraic_web(c: CurveParam, x0: Sequence, order: int) -> WebGerm:
    """Web of hyperplanes near x0 cut out by the d intersection points with c.

    The chart fixes the first coordinate where x0 is nonzero; the remaining n
    coordinates are the web variables.  Each intersection parameter t_a is
    lifted from its base value by Newton iteration.
    """
    x0 = [rat(v) for v in x0]
    if len(x0) != c.n + 1:
        raise PreconditionError(f"hyperplane needs {c.n + 1} coordinates")
    fixed = next((i for i, v in enumerate(x0) if v), None)
    if fixed is None:
        raise PreconditionError("base hyperplane not admissible")
    section: list = []
    for xi, g in zip(x0, c.components):
        section = upoly.add(section, upoly.scale(g, xi))
    if upoly.degree(section) != c.d:
        raise PreconditionError("base hyperplane not admissible")
    roots = rational_roots(section)
    if sum(roots.values()) != c.d or any(k != 1 for k in roots.values()):
        raise PreconditionError("base hyperplane not admissible")
    chart = [i for i in range(c.n + 1) if i != fixed]
    F = []
    for k in range(c.d + 1):
        coeffs = {(0,) * c.n: sum((x0[i] * _coef(c.components[i], k) for i in range(c.n + 1)), Fraction(0))}
        for v, i in enumerate(chart):
            e = [0] * c.n
            e[v] = 1
            coeffs[tuple(e)] = _coef(c.components[i], k)
        F.append(MJet(c.n, order, coeffs))
    u = []
    for t0 in sorted(roots):
        root = newton_root(F, t0)
        u.append(root - t0)
    return WebGerm(c.n, c.d, order, tuple(u))


def _coef(p: Sequence, k: int) -> Fraction:
    return p[k] if k < len(p) else Fraction(0)


def curve_with_section(n: int, roots: Sequence, seed: int, spread: int = 3) -> CurveParam:
    """A degree-d curve whose section by the hyperplane e_0 has the given roots."""
    roots = [rat(r) for r in roots]
    d = len(roots)
    rng = random.Random(seed)
    first = upoly.from_roots(roots)
    for _ in range(1000):
        comps = [first] + [[Fraction(rng.randint(-spread, spread)) for _ in range(d + 1)] for _ in range(n)]
        try:
            return CurveParam(n, d, tuple(comps))
        except PreconditionError:
            continue
    raise RuntimeError("could not draw a nondegenerate curve")


# -- text forms --------------------------------------------------------------

_MAP_HEADER = re.compile(r"^map\s+n=(\d+)\s+J=(\d+)\s*$")
_MAP_BLOCK = re.compile(r"^phi\s+(\d+)\s*:\s*$")
_CURVE_HEADER = re.compile(r"^curve\s+n=(\d+)\s+d=(\d+)\s*$")


def format_map(phi: Sequence[MJet]) -> str:
    lines = [f"map n={phi[0].nvars} J={phi[0].order}"]
    for i, comp in enumerate(phi):
        lines.append(f"phi {i}:")
        lines.extend(format_jet(comp))
    return "\n".join(lines) + "\n"


def parse_map(text: str) -> list:
    lines = [ln.split("#", 1)[0].rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines or not _MAP_HEADER.match(lines[0].strip()):
        raise ParseError("bad map header")
    n, order = (int(g) for g in _MAP_HEADER.match(lines[0].strip()).groups())
    blocks: dict = {}
    current = None
    for ln in lines[1:]:
        mb = _MAP_BLOCK.match(ln.strip())
        if mb:
            current = int(mb.group(1))
            if current in blocks:
                raise ParseError(f"duplicate block phi {current}")
            blocks[current] = []
        elif current is None:
            raise ParseError(f"jet line before any phi block: {ln!r}")
        else:
            blocks[current].append(ln)
    if sorted(blocks) != list(range(n)):
        raise ParseError(f"expected blocks phi 0..phi {n - 1}")
    try:
        return [parse_jet(blocks[i], n, order) for i in range(n)]
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_curve(c: CurveParam) -> str:
    lines = [f"curve n={c.n} d={c.d}"]
    for comp in c.components:
        padded = list(comp) + [Fraction(0)] * (c.d + 1 - len(comp))
        lines.append(" ".join(map(fmt_rat, padded)))
    return "\n".join(lines) + "\n"


def parse_curve(text: str) -> CurveParam:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not _CURVE_HEADER.match(lines[0]):
        raise ParseError("bad curve header")
    n, d = (int(g) for g in _CURVE_HEADER.match(lines[0]).groups())
    try:
        comps = [[rat(tok) for tok in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if len(comps) != n + 1:
        raise ParseError(f"expected {n + 1} component lines")
    return CurveParam(n, d, tuple(comps))
