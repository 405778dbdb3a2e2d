"""Truncated power series (jets) over Q.

An :class:`MJet` in ``n`` variables at order ``J`` stores the Taylor
coefficients of total degree <= J sparsely, keyed by exponent tuples.  A
:class:`UJet` is the dense univariate analogue.  Binary operations insist on
equal nvars and equal order; lowering precision is always an explicit
``truncate`` call.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

from . import exact
from .exact import fmt_rat, rat

Exponent = tuple


class MJet:
    __slots__ = ("nvars", "order", "coeffs", "_sorted")

    def __init__(self, nvars: int, order: int, coeffs: Optional[Mapping] = None):
        if nvars < 1:
            raise ValueError("a jet needs at least one variable")
        if order < 0:
            raise ValueError("negative truncation order")
        clean = {}
        for e, c in (coeffs or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or min(e) < 0:
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            if sum(e) > order:
                continue
            c = rat(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.nvars = nvars
        self.order = order
        self.coeffs = {e: c for e, c in clean.items() if c}
        self._sorted = None

    @classmethod
    def _raw(cls, nvars: int, order: int, coeffs: dict) -> "MJet":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.order = order
        obj.coeffs = coeffs
        obj._sorted = None
        return obj

    @classmethod
    def constant(cls, c, nvars: int, order: int) -> "MJet":
        c = rat(c)
        return cls._raw(nvars, order, {(0,) * nvars: c} if c else {})

    @classmethod
    def zero(cls, nvars: int, order: int) -> "MJet":
        return cls._raw(nvars, order, {})

    @classmethod
    def variable(cls, i: int, nvars: int, order: int) -> "MJet":
        if order < 1:
            return cls.zero(nvars, order)
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, order, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coefficients: Sequence, order: int) -> "MJet":
        n = len(coefficients)
        out = {}
        for i, c in enumerate(coefficients):
            e = [0] * n
            e[i] = 1
            out[tuple(e)] = c
        return cls(n, order, out)

    # -- inspection -------------------------------------------------------

    def _terms(self):
        if self._sorted is None:
            self._sorted = sorted(((e, c, sum(e)) for e, c in self.coeffs.items()), key=lambda t: t[2])
        return self._sorted

    @property
    def const(self) -> Fraction:
        return self.coeffs.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, e: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(e), Fraction(0))

    def linear_part(self) -> list:
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.coeffs.get(tuple(e), Fraction(0)))
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> Optional[int]:
        """Lowest degree present, or None for the zero jet."""
        return min((sum(e) for e in self.coeffs), default=None)

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MJet):
            return NotImplemented
        return (self.nvars, self.order, self.coeffs) == (other.nvars, other.order, other.coeffs)

    __hash__ = None

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"MJet(0; n={self.nvars}, J={self.order})"
        terms = []
        for e, c in sorted(self.coeffs.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            terms.append(fmt_rat(c) + ("*" + mono if mono else ""))
        return f"MJet({' + '.join(terms)}; J={self.order})"

    # -- ring operations --------------------------------------------------

    def _check(self, other: "MJet") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def _lift(self, other) -> "MJet":
        if isinstance(other, MJet):
            self._check(other)
            return other
        return MJet.constant(other, self.nvars, self.order)

    def __add__(self, other) -> "MJet":
        other = self._lift(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MJet._raw(self.nvars, self.order, out)

    __radd__ = __add__

    def __neg__(self) -> "MJet":
        return MJet._raw(self.nvars, self.order, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other) -> "MJet":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MJet":
        return self._lift(other) - self

    def scale(self, c) -> "MJet":
        c = rat(c)
        if not c:
            return MJet.zero(self.nvars, self.order)
        return MJet._raw(self.nvars, self.order, {e: c * v for e, v in self.coeffs.items()})

    def __mul__(self, other) -> "MJet":
        if not isinstance(other, MJet):
            return self.scale(other)
        self._check(other)
        order = self.order
        out: dict = {}
        right = other._terms()
        for ea, ca, da in self._terms():
            room = order - da
            if room < 0:
                break
            for eb, cb, db in right:
                if db > room:
                    break
                e = tuple([x + y for x, y in zip(ea, eb)])
                out[e] = out.get(e, 0) + ca * cb
        return MJet._raw(self.nvars, order, {e: c for e, c in out.items() if c})

    def __rmul__(self, other) -> "MJet":
        return self.scale(other)

    def __pow__(self, k: int) -> "MJet":
        if k < 0:
            return self.reciprocal() ** (-k)
        out = MJet.constant(1, self.nvars, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __truediv__(self, other) -> "MJet":
        if isinstance(other, MJet):
            return self * other.reciprocal()
        return self.scale(1 / rat(other))

    def reciprocal(self) -> "MJet":
        a0 = self.const
        if a0 == 0:
            raise ZeroDivisionError("jet is not a unit (zero constant term)")
        y = MJet.constant(1 / a0, self.nvars, self.order)
        for _ in range(self.order.bit_length()):
            y = y * (2 - self * y)
        return y

    # -- calculus and truncation -----------------------------------------

    def truncate(self, order: int) -> "MJet":
        if order > self.order:
            raise ValueError(f"cannot raise truncation order {self.order} to {order}")
        if order == self.order:
            return self
        return MJet._raw(self.nvars, order, {e: c for e, c in self.coeffs.items() if sum(e) <= order})

    def ddx(self, i: int) -> "MJet":
        """Partial derivative in x_i; the result has order J-1."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        out = {}
        for e, c in self.coeffs.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                out[tuple(f)] = c * k
        return MJet._raw(self.nvars, self.order - 1, out)

    def gradient(self) -> list:
        return [self.ddx(i) for i in range(self.nvars)]

    def homogeneous_part(self, k: int) -> "MJet":
        return MJet._raw(self.nvars, self.order, {e: c for e, c in self.coeffs.items() if sum(e) == k})

    # -- evaluation -------------------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        """Value of the truncated jet read as a polynomial."""
        p = [rat(x) for x in point]
        acc = Fraction(0)
        for e, c in self.coeffs.items():
            term = c
            for x, k in zip(p, e):
                if k:
                    term *= x ** k
            acc += term
        return acc

    def shift(self, point: Sequence) -> "MJet":
        """Re-expand the truncated jet, read as a polynomial, around ``point``.

        Returns ``y -> a(point + y)`` at the same order.  This is an exact
        polynomial identity only when ``a`` has no terms beyond its order,
        which is how webs given by polynomials are handled.
        """
        p = [rat(x) for x in point]
        out: dict = {}
        for e, c in self.coeffs.items():
            partial = {(): c}
            for x, k in zip(p, e):
                nxt = {}
                for pre, v in partial.items():
                    for j in range(k + 1):
                        w = v * comb(k, j) * x ** (k - j)
                        if w:
                            key = pre + (j,)
                            nxt[key] = nxt.get(key, 0) + w
                partial = nxt
            for f, v in partial.items():
                out[f] = out.get(f, 0) + v
        return MJet(self.nvars, self.order, out)


@dataclass(frozen=True)
class UJet:
    """Univariate jet: coefficients of t^0..t^order."""

    order: int
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(rat(c) for c in self.coeffs)
        if len(cs) > self.order + 1:
            cs = cs[: self.order + 1]
        cs = cs + (Fraction(0),) * (self.order + 1 - len(cs))
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_list(cls, coeffs: Iterable, order: Optional[int] = None) -> "UJet":
        cs = [rat(c) for c in coeffs]
        return cls(len(cs) - 1 if order is None else order, tuple(cs))

    def valuation(self) -> Optional[int]:
        return next((k for k, c in enumerate(self.coeffs) if c), None)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, order: int) -> "UJet":
        if order > self.order:
            raise ValueError(f"cannot raise truncation order {self.order} to {order}")
        return UJet(order, self.coeffs[: order + 1])

    def deriv(self) -> "UJet":
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        return UJet(self.order - 1, tuple(k * self.coeffs[k] for k in range(1, self.order + 1)))

    def evaluate(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def shift(self, a) -> "UJet":
        """Coefficients of s -> f(a + s), reading f as a polynomial."""
        from . import upoly

        cs = upoly.shift(self.coeffs, a)
        return UJet(self.order, tuple(cs))

    def __repr__(self) -> str:
        return f"UJet({', '.join(map(fmt_rat, self.coeffs))})"


# -- composition ----------------------------------------------------------


def compose_u(f: UJet, u: MJet) -> MJet:
    """``f(u(x))`` for a univariate jet f and u with zero constant term."""
    if u.const != 0:
        raise ValueError("inner jet must vanish at the origin")
    order = min(f.order, u.order)
    u = u.truncate(order)
    acc = MJet.constant(f.coeffs[order], u.nvars, order)
    for k in range(order - 1, -1, -1):
        acc = acc * u + f.coeffs[k]
    return acc


def _common_order(maps: Sequence[MJet]) -> int:
    orders = {m.order for m in maps}
    nv = {m.nvars for m in maps}
    if len(orders) != 1 or len(nv) != 1:
        raise ValueError("map components must share nvars and order")
    return orders.pop()


def compose(a: MJet, maps: Sequence[MJet]) -> MJet:
    """``a(maps(x))`` where every component of ``maps`` vanishes at 0."""
    if len(maps) != a.nvars:
        raise ValueError(f"need {a.nvars} map components, got {len(maps)}")
    if any(m.const != 0 for m in maps):
        raise ValueError("map components must vanish at the origin")
    order = min(a.order, _common_order(maps))
    maps = [m.truncate(order) for m in maps]
    nv = maps[0].nvars
    memo = {(0,) * a.nvars: MJet.constant(1, nv, order)}

    def mono(e):
        got = memo.get(e)
        if got is None:
            i = next(i for i, k in enumerate(e) if k)
            prev = list(e)
            prev[i] -= 1
            got = mono(tuple(prev)) * maps[i]
            memo[e] = got
        return got

    out: dict = {}
    for e, c in sorted(a.coeffs.items()):
        if sum(e) > order:
            continue
        for f, v in mono(e).coeffs.items():
            out[f] = out.get(f, 0) + c * v
    return MJet._raw(nv, order, {f: v for f, v in out.items() if v})


JetMap = list


def identity_map(n: int, order: int) -> JetMap:
    return [MJet.variable(i, n, order) for i in range(n)]


def linear_part_matrix(phi: Sequence[MJet]) -> list:
    return [comp.linear_part() for comp in phi]


def compose_maps(phi: Sequence[MJet], psi: Sequence[MJet]) -> JetMap:
    """phi o psi."""
    return [compose(c, psi) for c in phi]


def apply_linear(matrix, jets: Sequence[MJet]) -> list:
    out = []
    for row in matrix:
        acc = MJet.zero(jets[0].nvars, jets[0].order)
        for c, j in zip(row, jets):
            if c:
                acc = acc + j.scale(c)
        out.append(acc)
    return out


def invert_map(phi: Sequence[MJet]) -> JetMap:
    """Inverse jet of a local diffeomorphism fixing 0.

    Fixed-point iteration psi <- L^{-1}(x - N(psi)) where phi = L + N; every
    pass fixes one more degree.
    """
    n = len(phi)
    order = _common_order(phi)
    if phi[0].nvars != n:
        raise ValueError("a jet map must be square")
    if any(c.const != 0 for c in phi):
        raise ValueError("map must fix the origin")
    lin = linear_part_matrix(phi)
    try:
        linv = exact.inverse(lin)
    except ValueError:
        raise ValueError("singular linear part") from None
    nonlinear = [c - MJet.linear(row, order) for c, row in zip(phi, lin)]
    xs = identity_map(n, order)
    psi = apply_linear(linv, xs)
    if all(q.is_zero() for q in nonlinear):
        return psi
    for _ in range(max(order - 1, 0)):
        rhs = [x - compose(q, psi) for x, q in zip(xs, nonlinear)]
        psi = apply_linear(linv, rhs)
    return psi


def jet_matrix_inverse(m: Sequence[Sequence[MJet]]) -> list:
    """Inverse of a square matrix of jets that is invertible at 0."""
    n = len(m)
    nv, order = m[0][0].nvars, m[0][0].order
    one = MJet.constant(1, nv, order)
    zero = MJet.zero(nv, order)
    rows = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c].const != 0), None)
        if p is None:
            raise ValueError("jet matrix is singular at the origin")
        rows[c], rows[p] = rows[p], rows[c]
        inv = rows[c][c].reciprocal()
        rows[c] = [x * inv for x in rows[c]]
        for i in range(n):
            if i != c and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return [r[n:] for r in rows]


# -- implicit roots ---------------------------------------------------------


def _horner(coeffs: Sequence[MJet], t: MJet) -> MJet:
    acc = MJet.zero(t.nvars, t.order)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def newton_root(F: Sequence[MJet], t0) -> MJet:
    """Jet t(x) with t(0) = t0 and sum_k F[k](x) t(x)^k = 0 to full order.

    ``F`` lists the coefficients of a polynomial in t.  The base root must be
    simple.  Each Newton step doubles the number of correct degrees, so
    ceil(log2(J+1)) steps suffice.
    """
    if not F:
        raise ValueError("empty polynomial")
    order = _common_order(F)
    nv = F[0].nvars
    t0 = rat(t0)
    base = [c.const for c in F]
    if sum(c * t0 ** k for k, c in enumerate(base)) != 0:
        raise ValueError("t0 is not a root at the base point")
    dF = [c.scale(k) for k, c in enumerate(F)][1:]
    if sum(k * c * t0 ** (k - 1) for k, c in enumerate(base) if k) == 0:
        raise ValueError("multiple root")
    t = MJet.constant(t0, nv, order)
    for _ in range(order.bit_length()):
        t = t - _horner(F, t) * _horner(dF, t).reciprocal()
    return t


# -- text form --------------------------------------------------------------

_JET_LINE = re.compile(r"^\s*\[([\d\s]*)\]\s+(\S+)\s*$")


def format_jet(a: MJet) -> list:
    return [f"[{' '.join(map(str, e))}] {fmt_rat(c)}" for e, c in sorted(a.coeffs.items())]


def parse_jet(lines: Iterable[str], nvars: int, order: int) -> MJet:
    coeffs: dict = {}
    for line in lines:
        if not line.strip():
            continue
        mt = _JET_LINE.match(line)
        if not mt:
            raise ValueError(f"bad jet line: {line!r}")
        e = tuple(int(x) for x in mt.group(1).split())
        if len(e) != nvars:
            raise ValueError(f"exponent {e} does not have {nvars} entries")
        if sum(e) > order:
            raise ValueError(f"term {e} exceeds truncation order {order}")
        if e in coeffs:
            raise ValueError(f"duplicate exponent {e}")
        coeffs[e] = rat(mt.group(2))
    return MJet(nvars, order, coeffs)
