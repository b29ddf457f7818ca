"""Congruence subgroups of SL2(Z) and congruence boxes in Z^4."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .forms import GroupElement

GAMMA = "Gamma"
GAMMA0 = "Gamma0"
GAMMA_UPPER0 = "Gamma^0"

MAX_LEVEL = 12


@dataclass(frozen=True)
class SubgroupSpec:
    """One of Gamma(N), Gamma_0(N) (lower-left = 0 mod N) or Gamma^0(N) (upper-right = 0 mod N)."""

    kind: str
    level: int

    def __post_init__(self):
        if self.kind not in (GAMMA, GAMMA0, GAMMA_UPPER0):
            raise ValueError(f"unknown subgroup kind {self.kind!r}")
        if self.level < 1:
            raise ValueError("level must be positive")

    def contains_residue(self, g: tuple) -> bool:
        n = self.level
        p, q, r, s = (int(t) % n for t in g)
        if self.kind == GAMMA:
            return (p, q, r, s) == (1 % n, 0, 0, 1 % n)
        if self.kind == GAMMA0:
            return r == 0
        return q == 0

    def __contains__(self, g) -> bool:
        g = GroupElement(*g)
        return g.is_sl2z() and self.contains_residue(g)

    def index(self) -> int:
        return len(coset_representatives(self))

    def __str__(self) -> str:
        return f"{self.kind}({self.level})"


@lru_cache(maxsize=None)
def sl2_mod(n: int) -> tuple:
    """All elements of SL2(Z/n) as residue 4-tuples."""
    return tuple(
        m for m in itertools.product(range(n), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % n == 1 % n
    )


def _mul_mod(g, h, n):
    p, q, r, s = g
    p2, q2, r2, s2 = h
    return ((p * p2 + q * r2) % n, (p * q2 + q * s2) % n, (r * p2 + s * r2) % n, (r * q2 + s * s2) % n)


def _inv_mod(g, n):
    p, q, r, s = g
    return (s % n, -q % n, -r % n, p % n)


@lru_cache(maxsize=None)
def _small_lifts(n: int) -> dict:
    """Map each element of SL2(Z/n) to an integral lift with small entries."""
    lifts: dict = {}
    bound = 0
    target = len(sl2_mod(n))
    while len(lifts) < target:
        bound += 1
        rng = range(-bound, bound + 1)
        for p, q, r, s in itertools.product(rng, repeat=4):
            if p * s - q * r == 1:
                key = (p % n, q % n, r % n, s % n)
                if key not in lifts or _height((p, q, r, s)) < _height(lifts[key]):
                    lifts[key] = (p, q, r, s)
    return lifts


def _height(g):
    return (max(abs(t) for t in g), sum(abs(t) for t in g), tuple(-t for t in g))


@lru_cache(maxsize=None)
def coset_representatives(spec: SubgroupSpec) -> tuple:
    """Integral representatives ``g`` of the right cosets ``Gamma' g`` in SL2(Z)."""
    if spec.level > MAX_LEVEL:
        raise ValueError(f"unsupported level {spec.level}")
    n = spec.level
    lifts = _small_lifts(n)
    reps = []
    seen: list = []
    for g in sorted(sl2_mod(n), key=lambda m: _height(lifts[m])):
        if any(spec.contains_residue(_mul_mod(g, _inv_mod(h, n), n)) for h in seen):
            continue
        seen.append(g)
        reps.append(GroupElement(*lifts[g]))
    return tuple(reps)


def subgroup_index(spec: SubgroupSpec) -> int:
    n = spec.level
    image = [g for g in sl2_mod(n) if spec.contains_residue(g)]
    return len(sl2_mod(n)) // len(image)


@dataclass(frozen=True)
class CongruenceBox:
    """Subset of Z^4 cut out by per-coordinate residue sets and joint linear congruences.

    ``coords[i] = (m, residues)`` constrains coordinate i; ``joint`` holds
    ``((w_a, w_b, w_c, w_d), m, residues)`` constraints on ``w . x mod m``.
    """

    coords: tuple = ((1, frozenset({0})),) * 4
    joint: tuple = ()
    name: str = field(default="", compare=False)

    def modulus(self) -> int:
        mods = [m for m, _ in self.coords] + [m for _, m, _ in self.joint]
        return math.lcm(*mods)

    def __contains__(self, x) -> bool:
        return box_member(x, self)


def box_member(x, box: CongruenceBox) -> bool:
    for t, (m, res) in zip(x, box.coords):
        if int(t) % m not in res:
            return False
    for w, m, res in box.joint:
        if sum(wi * int(t) for wi, t in zip(w, x)) % m not in res:
            return False
    return True


def parity_class(spec: str) -> tuple:
    """Residue constraint for strings like ``"Z"``, ``"O"``, ``"2O"``, ``"4E"``, ``"2Z+1"``.

    ``E`` is the even integers, ``O`` the odd ones, and ``kE``/``kO`` their
    k-fold dilations.
    """
    spec = spec.replace(" ", "")
    aliases = {"Z": (1, {0}), "2Z": (2, {0}), "2Z+1": (2, {1}), "4Z": (4, {0}), "4Z+2": (4, {2}),
               "8Z": (8, {0}), "8Z+4": (8, {4})}
    if spec in aliases:
        m, res = aliases[spec]
        return m, frozenset(res)
    k = int(spec[:-1]) if len(spec) > 1 else 1
    kind = spec[-1]
    if kind == "E":
        return 2 * k, frozenset({0})
    if kind == "O":
        return 2 * k, frozenset({k})
    raise ValueError(f"cannot parse residue class {spec!r}")


def make_box(a="Z", b="Z", c="Z", d="Z", joint=(), name="") -> CongruenceBox:
    coords = tuple(parity_class(t) for t in (a, b, c, d))
    joints = tuple((tuple(w), *parity_class(cls)) for w, cls in joint)
    return CongruenceBox(coords, joints, name)


X1 = make_box(b="O", c="2O", d="4E", name="X1")
X2 = make_box(b="O", c="2O", d="4O", name="X2")
X3 = make_box(a="O", b="E", c="E", d="2O", name="X3")
X1p = make_box(c="O", b="2O", a="4E", name="X1'")
X2p = make_box(c="O", b="2O", a="4O", name="X2'")
X3p = make_box(d="O", b="E", c="E", a="2O", name="X3'")
X1pp = make_box(joint=(((0, 1, 1, 0), "O"), ((1, 0, 1, 0), "2E"), ((1, 1, 1, 1), "4E")), name="X1''")
X2pp = make_box(joint=(((0, 1, 1, 0), "O"), ((1, 0, 1, 0), "2E"), ((1, 1, 1, 1), "4O")), name="X2''")
X3pp = make_box(a="O", b="O", c="O", d="O", joint=(((1, 1, 1, 1), "2O"),), name="X3''")

INDUCTION_SETS = {"X1": X1, "X2": X2, "X3": X3}
PARTITION_SETS = {
    "X1": X1, "X1'": X1p, "X1''": X1pp,
    "X2": X2, "X2'": X2p, "X2''": X2pp,
    "X3": X3, "X3'": X3p, "X3''": X3pp,
}
