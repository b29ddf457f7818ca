"""Exact formal Dirichlet series with rational indices and coefficients in Q(sqrt 3)."""

from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from typing import Iterable, NamedTuple

Rational = Fraction


class CutoffExceeded(ValueError):
    """A comparison asked for coefficients beyond a series' reliable cutoff."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class QRoot3:
    """``u + v*sqrt(3)`` with exact rational u, v."""

    __slots__ = ("u", "v")

    def __init__(self, u=0, v=0):
        self.u = _frac(u)
        self.v = _frac(v)

    @classmethod
    def coerce(cls, x) -> "QRoot3":
        return x if isinstance(x, QRoot3) else cls(x)

    def __add__(self, other):
        other = QRoot3.coerce(other)
        return QRoot3(self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __neg__(self):
        return QRoot3(-self.u, -self.v)

    def __sub__(self, other):
        return self + (-QRoot3.coerce(other))

    def __rsub__(self, other):
        return QRoot3.coerce(other) - self

    def __mul__(self, other):
        other = QRoot3.coerce(other)
        return QRoot3(self.u * other.u + 3 * self.v * other.v, self.u * other.v + self.v * other.u)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QRoot3(other)
        if not isinstance(other, QRoot3):
            return NotImplemented
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __bool__(self):
        return bool(self.u) or bool(self.v)

    def __float__(self):
        return float(self.u) + float(self.v) * math.sqrt(3)

    def sign(self) -> int:
        """Exact sign of u + v*sqrt(3)."""
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if su == sv or sv == 0:
            return su
        if su == 0:
            return sv
        # opposite signs: compare u^2 with 3 v^2
        cmp = self.u * self.u - 3 * self.v * self.v
        return su if cmp > 0 else (sv if cmp < 0 else 0)

    def __repr__(self):
        return f"QRoot3({self.u}, {self.v})"

    def __str__(self):
        if not self.v:
            return str(self.u)
        if not self.u:
            return f"{self.v}*sqrt3"
        return f"{self.u}+{self.v}*sqrt3" if self.v > 0 else f"{self.u}-{-self.v}*sqrt3"


SQRT3 = QRoot3(0, 1)
ZERO = QRoot3()


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class DirichletSeries:
    """Sparse ``sum a_q q^{-s}``; coefficients are trusted for ``q <= cutoff`` only."""

    __slots__ = ("coeffs", "cutoff")

    def __init__(self, coeffs=None, cutoff=0):
        self.cutoff = _frac(cutoff)
        self.coeffs = {}
        for q, c in (coeffs or {}).items():
            c = QRoot3.coerce(c)
            if c:
                self.coeffs[_frac(q)] = c

    def __getitem__(self, q) -> QRoot3:
        q = _frac(q)
        if q > self.cutoff:
            raise CutoffExceeded(f"coefficient at {q} requested beyond reliable cutoff {self.cutoff}")
        return self.coeffs.get(q, ZERO)

    def items(self):
        return sorted(self.coeffs.items())

    def __add__(self, other: "DirichletSeries") -> "DirichletSeries":
        out = dict(self.coeffs)
        for q, c in other.coeffs.items():
            out[q] = out.get(q, ZERO) + c
        return DirichletSeries(out, min(self.cutoff, other.cutoff))

    def scale(self, k) -> "DirichletSeries":
        k = QRoot3.coerce(k)
        return DirichletSeries({q: k * c for q, c in self.coeffs.items()}, self.cutoff)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def twist(self, base: int, k: int) -> "DirichletSeries":
        """Multiply by ``base^{k s}``: the coefficient at q moves to ``q / base^k``."""
        f = Fraction(base) ** k
        return DirichletSeries({q / f: c for q, c in self.coeffs.items()}, self.cutoff / f)

    def truncated(self, Q) -> "DirichletSeries":
        Q = _frac(Q)
        if Q > self.cutoff:
            raise CutoffExceeded(f"truncation at {Q} beyond reliable cutoff {self.cutoff}")
        return DirichletSeries({q: c for q, c in self.coeffs.items() if q <= Q}, Q)

    def with_delta(self, q, delta) -> "DirichletSeries":
        out = dict(self.coeffs)
        q = _frac(q)
        out[q] = out.get(q, ZERO) + QRoot3.coerce(delta)
        return DirichletSeries(out, self.cutoff)

    def __eq__(self, other):
        if not isinstance(other, DirichletSeries):
            return NotImplemented
        return self.cutoff == other.cutoff and self.coeffs == other.coeffs

    def __repr__(self):
        return f"DirichletSeries({len(self.coeffs)} terms, cutoff={self.cutoff})"


class SeriesPair(NamedTuple):
    """Column ``(positive-discriminant part, negative-discriminant part)``."""

    first: DirichletSeries
    second: DirichletSeries

    @property
    def cutoff(self) -> Fraction:
        return min(self.first.cutoff, self.second.cutoff)

    def __add__(self, other):
        return SeriesPair(self.first + other.first, self.second + other.second)

    def __sub__(self, other):
        return SeriesPair(self.first - other.first, self.second - other.second)

    def __neg__(self):
        return SeriesPair(-self.first, -self.second)

    def scale(self, k) -> "SeriesPair":
        return SeriesPair(self.first.scale(k), self.second.scale(k))

    def __mul__(self, k):
        return self.scale(k)

    __rmul__ = __mul__

    def twist(self, base: int, k: int) -> "SeriesPair":
        return twist(self, base, k)

    def component(self, j: int) -> DirichletSeries:
        return self.first if j == 1 else self.second


def zero_pair(cutoff=float("inf")) -> SeriesPair:
    c = Fraction(10 ** 18) if cutoff == float("inf") else cutoff
    return SeriesPair(DirichletSeries({}, c), DirichletSeries({}, c))


def from_table(table, dual_normalization: bool = False) -> SeriesPair:
    """Series pair of a class-number table (dual tables are already indexed by |P|/27)."""
    first = {n: hp for n, (hp, _) in table.rows.items() if hp}
    second = {n: hm for n, (_, hm) in table.rows.items() if hm}
    return SeriesPair(DirichletSeries(first, table.cutoff), DirichletSeries(second, table.cutoff))


def linear_combine(terms: Iterable) -> SeriesPair:
    terms = list(terms)
    if not terms:
        raise ValueError("linear_combine needs at least one term")
    total = None
    for k, S in terms:
        piece = S.scale(k)
        total = piece if total is None else total + piece
    return total


def twist(S: SeriesPair, base: int, k: int) -> SeriesPair:
    if base not in (2, 3):
        raise ValueError("twist base must be 2 or 3")
    return SeriesPair(S.first.twist(base, k), S.second.twist(base, k))


def apply_A(S: SeriesPair) -> SeriesPair:
    """``A = (0 1; 3 0)`` acting on the column: ``(f, g) -> (g, 3 f)``."""
    return SeriesPair(S.second, S.first.scale(3))


def plus_minus(S: SeriesPair, sign: int) -> DirichletSeries:
    """``sqrt3 * first + sign * second``."""
    return S.first.scale(SQRT3) + S.second.scale(1 if sign > 0 else -1)


class Discrepancy(NamedTuple):
    q: Fraction
    component: int
    lhs: QRoot3
    rhs: QRoot3

    def as_dict(self) -> dict:
        return {"q": _fmt_q(self.q), "component": self.component, "lhs": str(self.lhs), "rhs": str(self.rhs)}


def equal_up_to(S: SeriesPair, T: SeriesPair, Q) -> tuple:
    """``(True, None)`` or ``(False, Discrepancy)`` for the least discrepant index ``q <= Q``."""
    Q = _frac(Q)
    if Q > S.cutoff or Q > T.cutoff:
        raise CutoffExceeded(f"comparison up to {Q} but reliable cutoffs are {S.cutoff} and {T.cutoff}")
    worst = None
    for j in (1, 2):
        a, b = S.component(j), T.component(j)
        keys = {q for q in a.coeffs if q <= Q} | {q for q in b.coeffs if q <= Q}
        for q in sorted(keys):
            if a.coeffs.get(q, ZERO) != b.coeffs.get(q, ZERO):
                cand = Discrepancy(q, j, a.coeffs.get(q, ZERO), b.coeffs.get(q, ZERO))
                if worst is None or (q, j) < (worst.q, worst.component):
                    worst = cand
                break
    return (worst is None, worst)


def integrality_check(S) -> bool:
    """All nonzero coefficients within the cutoff sit at integer indices."""
    parts = (S.first, S.second) if isinstance(S, SeriesPair) else (S,)
    return all(q.denominator == 1 for part in parts for q, c in part.coeffs.items() if q <= part.cutoff and c)


def support_gcd(S: DirichletSeries, Q) -> int:
    g = 0
    for q, c in S.coeffs.items():
        if q <= Q and c:
            if q.denominator != 1:
                raise ValueError(f"non-integral index {q} in support")
            g = math.gcd(g, q.numerator)
    return g


class TwoPowerPoly:
    """Laurent polynomial ``sum_k c_k 2^{k s}`` acting on series by twists."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {int(k): _frac(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, k: int, c=1) -> "TwoPowerPoly":
        return cls({k: c})

    def __add__(self, other):
        other = other if isinstance(other, TwoPowerPoly) else TwoPowerPoly({0: other})
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return TwoPowerPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return TwoPowerPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = other if isinstance(other, TwoPowerPoly) else TwoPowerPoly({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return TwoPowerPoly({0: other}) - self

    def __mul__(self, other):
        if not isinstance(other, TwoPowerPoly):
            return TwoPowerPoly({k: c * _frac(other) for k, c in self.terms.items()})
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return TwoPowerPoly(out)

    __rmul__ = __mul__

    def __call__(self, S: SeriesPair) -> SeriesPair:
        if not self.terms:
            return S.scale(0)
        return linear_combine((c, twist(S, 2, k)) for k, c in sorted(self.terms.items()))

    def __repr__(self):
        return "TwoPowerPoly(%s)" % dict(sorted(self.terms.items()))


def pow2s(k: int, c=1) -> TwoPowerPoly:
    """``c * 2^{k s}``."""
    return TwoPowerPoly.monomial(k, c)


def series_to_csv(S: SeriesPair) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["component", "q_num", "q_den", "coeff_u_num", "coeff_u_den", "coeff_v_num", "coeff_v_den"])
    for j in (1, 2):
        part = S.component(j)
        for q, c in part.items():
            if q <= part.cutoff:
                w.writerow([j, q.numerator, q.denominator, c.u.numerator, c.u.denominator,
                            c.v.numerator, c.v.denominator])
    return buf.getvalue()
