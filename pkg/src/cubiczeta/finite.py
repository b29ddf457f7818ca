"""Exhaustive finite-ring checks of the congruence lemmas and the induction criterion."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .congruence import GAMMA0, PARTITION_SETS, CongruenceBox, SubgroupSpec, sl2_mod
from .forms import SIGMA, TAU, act_int
from .lattices import PARITY_CONDITIONS

@dataclass
class FiniteCheckReport:
    name: str
    universe: int
    passed: bool
    witness: dict | None = None
    detail: str = ""
    wall_time_ms: float | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self, timing: bool = True) -> dict:
        out = {"relation": self.name, "cutoff": self.universe, "status": "pass" if self.passed else "fail",
               "first_discrepancy": self.witness,
               "wall_time_ms": round(self.wall_time_ms, 3) if timing and self.wall_time_ms is not None else None}
        if self.detail:
            out["detail"] = self.detail
        return out


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.wall_time_ms = (time.perf_counter() - t0) * 1000
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def residue_grid(m: int):
    """Coordinate arrays of every vector in (Z/m)^4."""
    grid = np.meshgrid(*(np.arange(m, dtype=np.int64),) * 4, indexing="ij")
    return tuple(t.ravel() for t in grid)


def disc_array(a, b, c, d):
    return b * b * c * c + 18 * a * b * c * d - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d


def box_mask(box: CongruenceBox, a, b, c, d):
    coords = (a, b, c, d)
    ok = np.ones(a.shape, dtype=bool)
    for t, (m, res) in zip(coords, box.coords):
        ok &= np.isin(t % m, list(res))
    for w, m, res in box.joint:
        ok &= np.isin(sum(wi * t for wi, t in zip(w, coords)) % m, list(res))
    return ok


def _first(mask, a, b, c, d):
    idx = np.flatnonzero(mask)
    if not len(idx):
        return None
    i = idx[0]
    return [int(a[i]), int(b[i]), int(c[i]), int(d[i])]


# residue classes: O odd, E even, kO = k*odd, kE = k*even
def _O(t):
    return t % 2 == 1


def _E(t):
    return t % 2 == 0


def _kO(k, t):
    return t % (2 * k) == k


def _kE(k, t):
    return t % (2 * k) == 0


def mod16_conditions(a, b, c, d):
    """The five cases characterising P = 4 mod 16."""
    return (
        _O(a) & _O(b) & _O(c) & _O(d) & _kO(2, a + b + c + d),
        _E(b) & _E(c) & _kO(2, a * d),
        _kE(2, a) & _kO(2, b) & _O(c),
        _kE(2, d) & _kO(2, c) & _O(b),
        _O(b + c) & _kE(2, a + c) & _kE(2, b + d),
    )


@_timed
def check_lemma_mod16() -> FiniteCheckReport:
    """P = 4 (16) iff exactly one of the five cases holds; the cases are pairwise disjoint."""
    a, b, c, d = residue_grid(16)
    n = len(a)
    P = disc_array(a, b, c, d) % 16
    conds = mod16_conditions(a, b, c, d)
    count = sum(cnd.astype(np.int64) for cnd in conds)
    bad = (P == 4) != (count == 1)
    overlap = count > 1
    witness = _first(bad | overlap, a, b, c, d)
    return FiniteCheckReport("lemma_mod16", n, n == 16 ** 4 and witness is None,
                             None if witness is None else {"x": witness, "P_mod_16": int(P[np.flatnonzero(bad | overlap)[0]])})


def _image_set(g, box: CongruenceBox, m: int):
    """Residue vectors ``g . x mod m`` for x in box mod m, as a set."""
    a, b, c, d = residue_grid(m)
    mask = box_mask(box, a, b, c, d)
    imgs = act_int(g, (a[mask], b[mask], c[mask], d[mask]))
    return set(zip(*(np.asarray(t) % m for t in imgs)))


def _residue_set(box: CongruenceBox, m: int):
    a, b, c, d = residue_grid(m)
    mask = box_mask(box, a, b, c, d)
    return set(zip(a[mask], b[mask], c[mask], d[mask]))


PRIMED = {"X1": ("X1'", "X1''"), "X2": ("X2'", "X2''"), "X3": ("X3'", "X3''")}


@_timed
def check_partition_mod32() -> FiniteCheckReport:
    """Disjoint decompositions of P = 4 and P = 20 (32), the tau/sigma translates, and the dual version."""
    m = 32
    a, b, c, d = residue_grid(m)
    n = len(a)
    P = disc_array(a, b, c, d) % m
    masks = {k: box_mask(box, a, b, c, d) for k, box in PARTITION_SETS.items()}
    total = sum(mk.astype(np.int64) for mk in masks.values())
    if (total > 1).any():
        return FiniteCheckReport("partition_mod32", n, False, {"x": _first(total > 1, a, b, c, d), "why": "overlap"})
    u4 = masks["X1"] | masks["X1'"] | masks["X1''"]
    u20 = masks["X2"] | masks["X2'"] | masks["X2''"] | masks["X3"] | masks["X3'"] | masks["X3''"]
    for label, lhs, rhs in (("P=4", P == 4, u4), ("P=20", P == 20, u20)):
        if (lhs != rhs).any():
            return FiniteCheckReport("partition_mod32", n, False, {"x": _first(lhs != rhs, a, b, c, d), "why": label})
    # X_i' = tau X_i and X_i'' = sigma X_i as residue sets mod 32
    for base, (p1, p2) in PRIMED.items():
        for g, target in ((TAU, p1), (SIGMA, p2)):
            if _image_set(g, PARTITION_SETS[base], m) != _residue_set(PARTITION_SETS[target], m):
                return FiniteCheckReport("partition_mod32", n, False, {"why": f"{target} != g.{base}"})
    # dual side: x = (a, 3b', 3c', d), P/27 = 3b'^2c'^2 + 6ab'c'd - 4ac'^3 - 4b'^3d - a^2d^2
    b3, c3 = 3 * b, 3 * c
    Q = (3 * b * b * c * c + 6 * a * b * c * d - 4 * a * c ** 3 - 4 * b ** 3 * d - a * a * d * d) % m
    if ((disc_array(a, b3, c3, d) - 27 * Q) % m).any():
        return FiniteCheckReport("partition_mod32", n, False, {"why": "P != 27 * (P/27) on the dual lattice"})
    dm = {k: box_mask(box, a, b3, c3, d) for k, box in PARTITION_SETS.items()}
    d4 = dm["X1"] | dm["X1'"] | dm["X1''"]
    d20 = dm["X2"] | dm["X2'"] | dm["X2''"] | dm["X3"] | dm["X3'"] | dm["X3''"]
    for label, lhs, rhs in (("P/27=-20", Q == (-20) % m, d4), ("P/27=-4", Q == (-4) % m, d20)):
        if (lhs != rhs).any():
            return FiniteCheckReport("partition_mod32", n, False,
                                     {"x": _first(lhs != rhs, a, b3, c3, d), "why": label})
    return FiniteCheckReport("partition_mod32", n, n == 32 ** 4)


def _in_gamma0_2(g):
    return g[2] % 2 == 0


@_timed
def check_induction_criterion() -> FiniteCheckReport:
    """{e, tau, sigma} represent SL2(Z)/Gamma_0(2); for x in X_i, g.x in X_i iff g in Gamma_0(2).

    The scan runs over SL2(Z/8): reduction SL2(Z) -> SL2(Z/8) is onto and
    membership in each X_i depends on residues mod 8 only, so the finite
    statement is equivalent to the one over SL2(Z).
    """
    reps = [(1, 0, 0, 1), tuple(TAU), tuple(SIGMA)]
    G2 = sl2_mod(2)
    # left cosets g Gamma_0(2): g^-1 h in Gamma_0(2) means the same coset
    for g, h in itertools.combinations(reps, 2):
        ginv = (g[3], -g[1], -g[2], g[0])
        prod = (ginv[0] * h[0] + ginv[1] * h[2], ginv[0] * h[1] + ginv[1] * h[3],
                ginv[2] * h[0] + ginv[3] * h[2], ginv[2] * h[1] + ginv[3] * h[3])
        if _in_gamma0_2(prod):
            return FiniteCheckReport("induction_criterion", 0, False, {"why": f"{g} and {h} share a coset"})
    index = len(G2) // sum(1 for g in G2 if _in_gamma0_2(g))
    if index != len(reps):
        return FiniteCheckReport("induction_criterion", 0, False, {"why": f"index {index} != 3"})
    G8 = sl2_mod(8)
    universe = 0
    for key in ("X1", "X2", "X3"):
        box = PARTITION_SETS[key]
        a, b, c, d = residue_grid(8)
        mask = box_mask(box, a, b, c, d)
        xs = (a[mask], b[mask], c[mask], d[mask])
        for g in G8:
            img = [np.asarray(t) % 8 for t in act_int(g, xs)]
            inside = box_mask(box, *img)
            universe += len(xs[0])
            if _in_gamma0_2(g):
                if not inside.all():
                    return FiniteCheckReport("induction_criterion", universe, False,
                                             {"g": list(g), "x": _first(~inside, *xs), "why": f"Gamma_0(2) leaves {key}"})
            elif inside.any():
                return FiniteCheckReport("induction_criterion", universe, False,
                                         {"g": list(g), "x": _first(inside, *xs), "why": f"g outside Gamma_0(2) keeps {key}"})
    return FiniteCheckReport("induction_criterion", universe, len(G8) == 384,
                             detail="SL2(Z/8) scan; surjectivity of reduction mod 8 and residue-determinacy of X_i "
                                    "make it equivalent to the statement over SL2(Z)")


MOD2_CLASSES = (
    ("0000",), ("0001", "1000", "1111"), ("0010", "0100", "0011", "1100", "0101", "1010"),
    ("0110",), ("0111", "1110", "1001"), ("1011", "1101"),
)


def mod2_orbits() -> list:
    """Orbits of SL2(Z/2) on (Z/2)^4, each as a sorted tuple of 4-bit strings."""
    seen: set = set()
    out = []
    for x in itertools.product(range(2), repeat=4):
        if x in seen:
            continue
        orb = {tuple(t % 2 for t in act_int(g, x)) for g in sl2_mod(2)}
        seen |= orb
        out.append(tuple(sorted("".join(map(str, y)) for y in orb)))
    return sorted(out)


@_timed
def check_L1_mod2_orbits() -> FiniteCheckReport:
    orbits = mod2_orbits()
    expected = sorted(tuple(sorted(cls)) for cls in MOD2_CLASSES)
    ok = orbits == expected
    return FiniteCheckReport("L1_mod2_orbits", 16, ok,
                             None if ok else {"found": [list(o) for o in orbits]},
                             extra={"orbit_count": len(orbits)})


def _closure(gens, n):
    from .congruence import _mul_mod

    ident = (1 % n, 0, 0, 1 % n)
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                k = _mul_mod(g, h, n)
                if k not in group:
                    group.add(k)
                    nxt.append(k)
        frontier = nxt
    return group


def counting_lemma_sum(G, H, x, n) -> tuple:
    """``(sum over H-orbits y in Gx of |G_x|/|H_y|, [G:H])`` for the mod-n action on (Z/n)^4."""
    from fractions import Fraction

    def act(g, y):
        return tuple(t % n for t in act_int(g, y))

    Gx = [g for g in G if act(g, x) == x]
    orbit = {act(g, x) for g in G}
    total = Fraction(0)
    seen: set = set()
    for y in sorted(orbit):
        if y in seen:
            continue
        seen |= {act(h, y) for h in H}
        Hy = sum(1 for h in H if act(h, y) == y)
        total += Fraction(len(Gx), Hy)
    return total, Fraction(len(G), len(H))


@_timed
def check_counting_lemma(trials: int = 100, seed: int = 0) -> FiniteCheckReport:
    """Random subgroups H of SL2(Z/n), n in {2, 4}, acting on (Z/n)^4."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    for t in range(trials):
        n = rng.choice((2, 4))
        G = sl2_mod(n)
        gens = rng.sample(G, rng.randint(1, 2))
        H = sorted(_closure(gens, n))
        x = tuple(rng.randrange(n) for _ in range(4))
        got, index = counting_lemma_sum(G, H, x, n)
        if got != index:
            return FiniteCheckReport("counting_lemma", t + 1, False,
                                     {"n": n, "H_gens": [list(g) for g in gens], "x": list(x),
                                      "sum": str(got), "index": str(index)})
    return FiniteCheckReport("counting_lemma", trials, True)


# coefficients of 6 xi_i in terms of class representatives (mod-2 decomposition)
MOD2_COEFFICIENTS = {
    "L1": {"0000": 1, "0001": 3, "0010": 6, "0110": 1, "0111": 3, "1011": 2},
    "L2": {"0000": 1, "0111": 3},
    "L3": {"0000": 1, "0110": 1, "1011": 2},
    "L4": {"0000": 1, "0001": 3, "0110": 1, "0111": 3},
    "L5": {"0000": 1, "0110": 1},
    "2L1": {"0000": 1},
}


def lattice_mod2_classes(lattice: str) -> list:
    """The 4-bit classes mod 2 L1 contained in ``lattice`` (or in 2 L1)."""
    out = []
    for x in itertools.product(range(2), repeat=4):
        if lattice == "2L1":
            ok = not any(x)
        else:
            ok = all(sum(w * t for w, t in zip(row, x)) % 2 == 0 for row in PARITY_CONDITIONS[lattice])
        if ok:
            out.append("".join(map(str, x)))
    return out


@_timed
def check_mod2_membership_counts() -> FiniteCheckReport:
    rep_of = {member: cls[0] for cls in MOD2_CLASSES for member in cls}
    for lattice, want in MOD2_COEFFICIENTS.items():
        got: dict = {}
        for pat in lattice_mod2_classes(lattice):
            got[rep_of[pat]] = got.get(rep_of[pat], 0) + 1
        if got != want:
            return FiniteCheckReport("mod2_membership_counts", 16 * len(MOD2_COEFFICIENTS), False,
                                     {"lattice": lattice, "found": got, "expected": want})
    return FiniteCheckReport("mod2_membership_counts", 16 * len(MOD2_COEFFICIENTS), True)


FINITE_CHECKS = {
    "lemma_mod16": check_lemma_mod16,
    "partition_mod32": check_partition_mod32,
    "induction_criterion": check_induction_criterion,
    "L1_mod2_orbits": check_L1_mod2_orbits,
    "counting_lemma": check_counting_lemma,
    "mod2_membership_counts": check_mod2_membership_counts,
}


def run_all(seed: int = 0) -> list:
    out = []
    for name, fn in FINITE_CHECKS.items():
        out.append(fn(seed=seed) if name == "counting_lemma" else fn())
    return out
