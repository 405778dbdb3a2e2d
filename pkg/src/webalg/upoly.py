"""Univariate polynomials over Q as ascending coefficient lists.

The zero polynomial is the empty list; every other value is trimmed so that
its last entry is nonzero.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from .exact import rat

Poly = list


def trim(p: Sequence) -> Poly:
    out = [rat(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(trim(p)) - 1


def add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p: Sequence, q: Sequence) -> Poly:
    return add(p, [-c for c in q])


def scale(p: Sequence, c) -> Poly:
    return trim([c * x for x in p])


def mul(p: Sequence, q: Sequence) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def evaluate(p: Sequence, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def deriv(p: Sequence) -> Poly:
    return trim([i * p[i] for i in range(1, len(p))])


def from_roots(roots: Sequence) -> Poly:
    out: Poly = [Fraction(1)]
    for r in roots:
        out = mul(out, [-rat(r), Fraction(1)])
    return out


def shift(p: Sequence, a) -> Poly:
    """Coefficients of ``p(s + a)`` in ``s``."""
    a = rat(a)
    out = [Fraction(0)] * len(p)
    for k, c in enumerate(p):
        if c:
            for j in range(k + 1):
                out[j] += c * comb(k, j) * a ** (k - j)
    return trim(out)


def divmod_poly(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(p)
    quot = [Fraction(0)] * max(len(r) - len(q) + 1, 0)
    lead = q[-1]
    while len(r) >= len(q):
        c = r[-1] / lead
        k = len(r) - len(q)
        quot[k] = c
        r = trim([r[i] - (c * q[i - k] if i >= k else 0) for i in range(len(r))])
    return trim(quot), r


def monic(p: Sequence) -> Poly:
    p = trim(p)
    return [c / p[-1] for c in p] if p else []


def gcd(p: Sequence, q: Sequence) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    a, b = trim(p), trim(q)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def gcd_many(polys: Sequence[Sequence]) -> Poly:
    out: Poly = []
    for p in polys:
        out = gcd(out, p)
        if len(out) == 1:
            break
    return out
