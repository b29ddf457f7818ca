"""Binary cubic forms, 2x2 group elements and the twisted GL2(Q) action.

A form ``(a, b, c, d)`` stands for ``a u^3 + b u^2 v + c u v^2 + d v^3``.
A matrix ``g = (p, q; r, s)`` acts by

    (g . x)(u, v) = x(p u + r v, q u + s v) / det(g)

which is a left action and restricts to the usual substitution on SL2(Z).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import NamedTuple, Union

Number = Union[int, Fraction]


def _normalize(value: Number) -> Number:
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    return value


class BinaryCubicForm(NamedTuple):
    a: Number
    b: Number
    c: Number
    d: Number

    def __neg__(self) -> "BinaryCubicForm":
        return BinaryCubicForm(-self.a, -self.b, -self.c, -self.d)

    def __call__(self, u: Number, v: Number) -> Number:
        return ((self.a * u + self.b * v) * u + self.c * v * v) * u + self.d * v * v * v

    def is_integral(self) -> bool:
        return all(isinstance(_normalize(t), int) for t in self)

    def mod(self, n: int) -> tuple[int, int, int, int]:
        if not self.is_integral():
            raise ValueError(f"{self} is not integral")
        return tuple(int(t) % n for t in self)

    def __str__(self) -> str:
        return "(%s,%s,%s,%s)" % tuple(self)


class GroupElement(NamedTuple):
    """Matrix ``(p q; r s)`` with exact rational entries."""

    p: Number
    q: Number
    r: Number
    s: Number

    @property
    def det(self) -> Number:
        return _normalize(Fraction(self.p * self.s - self.q * self.r))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        p, q, r, s = self
        p2, q2, r2, s2 = other
        return GroupElement(p * p2 + q * r2, p * q2 + q * s2, r * p2 + s * r2, r * q2 + s * s2)

    def inverse(self) -> "GroupElement":
        det = Fraction(self.det)
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        p, q, r, s = self
        return GroupElement(*(_normalize(Fraction(t) / det) for t in (s, -q, -r, p)))

    def is_sl2z(self) -> bool:
        return all(isinstance(_normalize(t), int) for t in self) and self.det == 1

    def mod(self, n: int) -> tuple[int, int, int, int]:
        return tuple(int(t) % n for t in self)


IDENTITY = GroupElement(1, 0, 0, 1)
TAU = GroupElement(0, -1, 1, 0)
SIGMA = GroupElement(1, 1, -1, 0)
T_UPPER = GroupElement(1, 1, 0, 1)

# All of SL2(Z) with entries in {-1, 0, 1}: every transition between two
# forms whose reduction point lies in the closed fundamental domain is here.
SMALL_SL2 = tuple(
    GroupElement(p, q, r, s)
    for p in (-1, 0, 1)
    for q in (-1, 0, 1)
    for r in (-1, 0, 1)
    for s in (-1, 0, 1)
    if p * s - q * r == 1
)


def discriminant(x) -> Number:
    a, b, c, d = x
    return b * b * c * c + 18 * a * b * c * d - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d


def hessian(x) -> tuple:
    """Quadratic covariant ``(b^2-3ac, bc-9ad, c^2-3bd)``; its discriminant is ``-3 P(x)``."""
    a, b, c, d = x
    return (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)


def _untwisted_rows(g) -> tuple:
    p, q, r, s = g
    return (
        (p ** 3, p * p * q, p * q * q, q ** 3),
        (3 * p * p * r, p * p * s + 2 * p * q * r, q * q * r + 2 * p * q * s, 3 * q * q * s),
        (3 * p * r * r, q * r * r + 2 * p * r * s, p * s * s + 2 * q * r * s, 3 * q * s * s),
        (r ** 3, r * r * s, r * s * s, s ** 3),
    )


def action_matrix(g) -> tuple:
    """4x4 matrix m with ``m @ (a,b,c,d) == act(g, x)``."""
    det = GroupElement(*g).det
    if det == 0:
        raise ValueError("group element must have nonzero determinant")
    return tuple(tuple(_normalize(Fraction(v) / det) if det != 1 else v for v in row) for row in _untwisted_rows(g))


def act(g, x) -> BinaryCubicForm:
    """Twisted action; returns rational coefficients when the image is not integral."""
    g = GroupElement(*g)
    det = g.det
    if det == 0:
        raise ValueError("group element must have nonzero determinant")
    rows = _untwisted_rows(g)
    out = [sum(m * t for m, t in zip(row, x)) for row in rows]
    if det != 1:
        out = [_normalize(Fraction(v) / det) for v in out]
    else:
        out = [_normalize(v) for v in out]
    return BinaryCubicForm(*out)


def act_int(g, x) -> tuple[int, int, int, int]:
    """Fast path for ``g`` in SL2(Z) acting on integral ``x``; plain tuples."""
    p, q, r, s = g
    a, b, c, d = x
    return (
        ((a * p + b * q) * p + c * q * q) * p + d * q * q * q,
        3 * p * p * r * a + (p * p * s + 2 * p * q * r) * b + (q * q * r + 2 * p * q * s) * c + 3 * q * q * s * d,
        3 * p * r * r * a + (q * r * r + 2 * p * r * s) * b + (p * s * s + 2 * q * r * s) * c + 3 * q * s * s * d,
        ((a * r + b * s) * r + c * s * s) * r + d * s * s * s,
    )


def quadratic_act(g, h) -> tuple:
    """Substitution action of ``g`` on a binary quadratic form ``(A, B, C)``."""
    p, q, r, s = g
    A, B, C = h
    return (
        A * p * p + B * p * q + C * q * q,
        2 * A * p * r + B * (p * s + q * r) + 2 * C * q * s,
        A * r * r + B * r * s + C * s * s,
    )


def random_sl2z(rng: random.Random, steps: int = 8) -> GroupElement:
    """Random word in the generators S, T, T^-1 (deterministic given ``rng``)."""
    g = IDENTITY
    gens = (TAU, T_UPPER, GroupElement(1, -1, 0, 1), GroupElement(1, 0, 1, 1), GroupElement(1, 0, -1, 1))
    for _ in range(steps):
        g = g @ rng.choice(gens)
    return g
