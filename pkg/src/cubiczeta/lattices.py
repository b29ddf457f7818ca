"""The ten SL2(Z)-invariant integral models and their class-number tables."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

PRIMAL = ("L1", "L2", "L3", "L4", "L5")
DUAL = ("L1v", "L2v", "L3v", "L4v", "L5v")
LATTICES = PRIMAL + DUAL
BIT = {name: i for i, name in enumerate(LATTICES)}

# parity conditions (coefficient vectors over F2) cutting each primal lattice out of L1
PARITY_CONDITIONS = {
    "L1": (),
    "L2": ((1, 1, 0, 1), (1, 0, 1, 1)),
    "L3": ((1, 1, 1, 0), (0, 1, 1, 1)),
    "L4": ((0, 1, 1, 0),),
    "L5": ((1, 0, 0, 0), (0, 0, 0, 1), (0, 1, 1, 0)),
}
# L_i^v = L_1^v intersected with this primal lattice
DUAL_PARTNER = {"L1v": "L1", "L2v": "L3", "L3v": "L2", "L4v": "L5", "L5v": "L4"}

# inclusions (larger, smaller) of the two Hasse diagrams
INCLUSIONS = (
    ("L1", "L4"), ("L1", "L3"), ("L4", "L2"), ("L4", "L5"), ("L3", "L5"),
    ("L1v", "L5v"), ("L1v", "L2v"), ("L5v", "L3v"), ("L5v", "L4v"), ("L2v", "L4v"),
)


def _parity_ok(x, conditions) -> bool:
    return all(sum(w * int(t) for w, t in zip(row, x)) % 2 == 0 for row in conditions)


def in_dual_standard(x) -> bool:
    return int(x[1]) % 3 == 0 and int(x[2]) % 3 == 0


def member(x, lattice: str) -> bool:
    """Membership of an integral form in one of the ten lattices."""
    if lattice in PARITY_CONDITIONS:
        return _parity_ok(x, PARITY_CONDITIONS[lattice])
    if lattice in DUAL_PARTNER:
        return in_dual_standard(x) and _parity_ok(x, PARITY_CONDITIONS[DUAL_PARTNER[lattice]])
    raise KeyError(lattice)


def membership_mask(x) -> int:
    a, b, c, d = (int(t) for t in x)
    l2 = (a + b + d) % 2 == 0 and (a + c + d) % 2 == 0
    l3 = (a + b + c) % 2 == 0 and (b + c + d) % 2 == 0
    l4 = (b + c) % 2 == 0
    l5 = l4 and a % 2 == 0 and d % 2 == 0
    mask = 1 | l2 << 1 | l3 << 2 | l4 << 3 | l5 << 4
    if b % 3 == 0 and c % 3 == 0:
        mask |= 1 << 5 | l3 << 6 | l2 << 7 | l5 << 8 | l4 << 9
    return mask


def _f2_rank(rows) -> int:
    vecs = [int("".join(str(t % 2) for t in row), 2) for row in rows]
    rank = 0
    for bit in reversed(range(4)):
        pivot = next((v for v in vecs if v >> bit & 1), None)
        if pivot is None:
            continue
        vecs.remove(pivot)
        vecs = [v ^ pivot if v >> bit & 1 else v for v in vecs]
        rank += 1
    return rank


def lattice_index(lattice: str) -> int:
    """[L1 : L_i] for primal, [L1^v : L_i^v] for dual lattices."""
    primal = DUAL_PARTNER.get(lattice, lattice)
    if primal not in PARITY_CONDITIONS:
        raise KeyError(lattice)
    return 2 ** _f2_rank(PARITY_CONDITIONS[primal])


def is_dual(lattice: str) -> bool:
    return lattice in DUAL


class InsufficientCutoff(ValueError):
    """Raised when orbit data does not reach the discriminant range a computation needs."""


@dataclass
class ClassNumberTable:
    """Weighted class numbers ``n -> (h_plus, h_minus)`` (sparse, zero rows absent).

    ``n`` is ``|P|`` on primal lattices and ``|P|/27`` on dual ones.
    """

    lattice: str
    cutoff: Fraction
    rows: dict = field(default_factory=dict)

    def h(self, n: int) -> tuple:
        return self.rows.get(n, (Fraction(0), Fraction(0)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lattice", "n", "h_plus_num", "h_plus_den", "h_minus_num", "h_minus_den"])
        for n in sorted(self.rows):
            hp, hm = self.rows[n]
            w.writerow([self.lattice, n, hp.numerator, hp.denominator, hm.numerator, hm.denominator])
        return buf.getvalue()


def build_tables(orbits: Iterable, orbit_cutoff: int, cutoffs: dict | None = None) -> dict:
    """Fold an orbit stream into class-number tables for every lattice.

    ``orbit_cutoff`` is the |P| bound up to which the stream is complete.
    ``cutoffs`` optionally caps lattices (in their own index: |P| or |P|/27);
    asking for more than the stream supports raises InsufficientCutoff.
    """
    limits = {}
    for name in LATTICES:
        natural = Fraction(orbit_cutoff, 27) if is_dual(name) else Fraction(orbit_cutoff)
        want = Fraction(cutoffs[name]) if cutoffs and name in cutoffs else natural
        if want > natural:
            need = want * 27 if is_dual(name) else want
            raise InsufficientCutoff(f"{name} up to {want} needs orbits to |P| <= {need}, have {orbit_cutoff}")
        limits[name] = want
    acc = {name: defaultdict(lambda: [Fraction(0), Fraction(0)]) for name in LATTICES}
    for rec in orbits:
        P = rec.disc
        weight = Fraction(1, rec.stab)
        side = 0 if P > 0 else 1
        for name in LATTICES:
            if not rec.membership >> BIT[name] & 1:
                continue
            if is_dual(name):
                if P % 27:
                    raise AssertionError(f"dual form {rec.rep} has discriminant {P} not divisible by 27")
                n = abs(P) // 27
            else:
                n = abs(P)
            if n <= limits[name]:
                acc[name][n][side] += weight
    return {
        name: ClassNumberTable(name, limits[name], {n: tuple(v) for n, v in sorted(acc[name].items())})
        for name in LATTICES
    }
