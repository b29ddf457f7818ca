"""Named series, partial zeta functions and coefficientwise verification of the relations."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

from .congruence import (GAMMA, GAMMA0, GAMMA_UPPER0, PARTITION_SETS, CongruenceBox, SubgroupSpec,
                         box_member, make_box, sl2_mod)
from .forms import GroupElement, act_int
from .lattices import BIT, InsufficientCutoff, build_tables
from .orbits import decompose_orbit
from .series import (CutoffExceeded, DirichletSeries, SeriesPair, apply_A, equal_up_to, integrality_check,
                     plus_minus, pow2s, support_gcd)

GAMMA1 = SubgroupSpec(GAMMA, 1)
GAMMA2 = SubgroupSpec(GAMMA, 2)
GAMMA0_2 = SubgroupSpec(GAMMA0, 2)
GAMMA_UPPER0_2 = SubgroupSpec(GAMMA_UPPER0, 2)

# boxes related by rescaling one coordinate by 2 (compared through a 2^{-2s} twist)
SCALED_BOXES = {
    "X1": make_box(b="O", c="2O", d="8Z", name="X1"),
    "X2": make_box(b="O", c="2O", d="4O", name="X2"),
    "E,O,O,E": make_box(a="E", b="O", c="O", d="E", name="(E,O,O,E)"),
    "E,O,O,O": make_box(a="E", b="O", c="O", d="O", name="(E,O,O,O)"),
}

_GENERATORS = {
    (GAMMA, 1): ((0, -1, 1, 0), (1, 1, 0, 1)),
    (GAMMA0, 1): ((0, -1, 1, 0), (1, 1, 0, 1)),
    (GAMMA_UPPER0, 1): ((0, -1, 1, 0), (1, 1, 0, 1)),
    (GAMMA, 2): ((-1, 0, 0, -1), (1, 2, 0, 1), (1, 0, 2, 1)),
    (GAMMA0, 2): ((-1, 0, 0, -1), (1, 1, 0, 1), (1, 0, 2, 1)),
    (GAMMA_UPPER0, 2): ((-1, 0, 0, -1), (1, 2, 0, 1), (1, 0, 1, 1)),
}


def box_is_invariant(box: CongruenceBox, spec: SubgroupSpec) -> bool:
    """Exact check that ``box`` is stable under ``spec`` (decided on residues)."""
    m = box.modulus()
    gens = _GENERATORS.get((spec.kind, spec.level))
    if gens is None:
        n = math.lcm(m, spec.level)
        gens = [g for g in sl2_mod(n) if spec.contains_residue(g)]
    import itertools

    for x in itertools.product(range(m), repeat=4):
        if not box_member(x, box):
            continue
        for g in gens:
            if not box_member(tuple(t % m for t in act_int(g, x)), box):
                return False
    return True


@dataclass(frozen=True)
class PartialZetaSpec:
    """What to sum over.

    kind ``lattice``: a lattice name (``L1``..``L5v``) under ``subgroup``;
    ``congruence``: forms in L1 with ``P = l mod N``;
    ``dual_congruence``: forms in L1v with ``P/27 = l mod N`` (indexed by |P|/27);
    ``mod2``: the class ``pattern + 2 L1`` under Gamma(2);
    ``box``: a congruence box under ``subgroup``.
    """

    kind: str
    lattice: str = "L1"
    l: int = 0
    N: int = 1
    pattern: str = ""
    box: CongruenceBox | None = None
    subgroup: SubgroupSpec = GAMMA1

    @classmethod
    def congruence(cls, l, N):
        return cls("congruence", l=l % N, N=N)

    @classmethod
    def dual_congruence(cls, l, N):
        return cls("dual_congruence", lattice="L1v", l=l % N, N=N)

    @classmethod
    def mod2(cls, pattern: str):
        if len(pattern) != 4 or set(pattern) - {"0", "1"}:
            raise ValueError(f"bad residue pattern {pattern!r}")
        return cls("mod2", pattern=pattern, subgroup=GAMMA2)

    @classmethod
    def of_box(cls, box: CongruenceBox, subgroup: SubgroupSpec):
        return cls("box", box=box, subgroup=subgroup)

    @classmethod
    def of_lattice(cls, lattice: str, subgroup: SubgroupSpec = GAMMA1):
        return cls("lattice", lattice=lattice, subgroup=subgroup)

    @property
    def name(self) -> str:
        if self.kind == "lattice":
            return f"{self.lattice}@{self.subgroup}"
        if self.kind == "congruence":
            return f"L1[P={self.l} mod {self.N}]"
        if self.kind == "dual_congruence":
            return f"L1v[P/27={self.l} mod {self.N}]"
        if self.kind == "mod2":
            return f"xi_{self.pattern}"
        return f"{self.box.name or self.box}@{self.subgroup}"


class ZetaData:
    """All series derived from one complete orbit stream (|P| <= X).

    ``perturb`` maps a series name to ``(component, q, delta)`` and is used for
    mutation testing.  Every series request is recorded in ``accessed``.
    """

    def __init__(self, orbits, X: int, perturb: dict | None = None, _shared: dict | None = None):
        self.orbits = orbits
        self.X = int(X)
        self.perturb = dict(perturb or {})
        self._shared = _shared if _shared is not None else {}
        self.accessed: set = set()

    def limited(self, X: int) -> "ZetaData":
        if X >= self.X:
            return self
        views = self._shared.setdefault("views", {})
        if X not in views:
            views[X] = ZetaData([r for r in self.orbits if abs(r.disc) <= X], X)
        view = views[X]
        if self.perturb:
            return ZetaData(view.orbits, X, self.perturb, view._shared)
        return view

    def mutated(self, name: str, component: int, q, delta) -> "ZetaData":
        perturb = dict(self.perturb)
        perturb[name] = (component, Fraction(q), delta)
        return ZetaData(self.orbits, self.X, perturb, self._shared)

    # -- base series
    def _tables(self):
        if "tables" not in self._shared:
            self._shared["tables"] = build_tables(self.orbits, self.X)
        return self._shared["tables"]

    def series(self, spec: PartialZetaSpec) -> SeriesPair:
        name = spec.name
        self.accessed.add(name)
        cache = self._shared.setdefault("series", {})
        if name not in cache:
            cache[name] = partial_zeta(spec, self)
        S = cache[name]
        if name in self.perturb:
            j, q, delta = self.perturb[name]
            if j == 1:
                S = SeriesPair(S.first.with_delta(q, delta), S.second)
            else:
                S = SeriesPair(S.first, S.second.with_delta(q, delta))
        return S

    def xi(self, i: int) -> SeriesPair:
        return self.series(PartialZetaSpec.of_lattice(f"L{i}"))

    def xiv(self, i: int) -> SeriesPair:
        return self.series(PartialZetaSpec.of_lattice(f"L{i}v"))

    def cong(self, l: int, N: int) -> SeriesPair:
        return self.series(PartialZetaSpec.congruence(l, N))

    def congv(self, l: int, N: int) -> SeriesPair:
        return self.series(PartialZetaSpec.dual_congruence(l, N))

    def mod2(self, pattern: str) -> SeriesPair:
        return self.series(PartialZetaSpec.mod2(pattern))

    def box(self, box: CongruenceBox, subgroup: SubgroupSpec) -> SeriesPair:
        return self.series(PartialZetaSpec.of_box(box, subgroup))

    def sub(self, lattice: str, subgroup: SubgroupSpec) -> SeriesPair:
        return self.series(PartialZetaSpec.of_lattice(lattice, subgroup))

    def suborbits(self, subgroup: SubgroupSpec) -> list:
        """``(disc, y, weight)`` for every ``subgroup``-orbit inside the enumerated orbits."""
        key = ("sub", subgroup)
        if key not in self._shared:
            out = []
            for rec in self.orbits:
                for piece in decompose_orbit(rec.rep, subgroup):
                    out.append((rec.disc, piece.rep, Fraction(1, piece.stab)))
            self._shared[key] = out
        return self._shared[key]


def _accumulate(items, cutoff) -> SeriesPair:
    pos: dict = {}
    neg: dict = {}
    for n, P, w in items:
        target = pos if P > 0 else neg
        target[n] = target.get(n, 0) + w
    return SeriesPair(DirichletSeries(pos, cutoff), DirichletSeries(neg, cutoff))


def partial_zeta(spec: PartialZetaSpec, data: ZetaData) -> SeriesPair:
    """Series of ``spec`` built from the orbit stream of ``data``."""
    X = data.X
    if spec.kind == "lattice" and spec.subgroup == GAMMA1:
        from .series import from_table

        return from_table(data._tables()[spec.lattice])
    if spec.kind == "congruence":
        bit = 1 << BIT["L1"]
        items = ((abs(r.disc), r.disc, Fraction(1, r.stab)) for r in data.orbits
                 if r.membership & bit and (r.disc - spec.l) % spec.N == 0)
        return _accumulate(items, Fraction(X))
    if spec.kind == "dual_congruence":
        bit = 1 << BIT["L1v"]
        items = ((abs(r.disc) // 27, r.disc, Fraction(1, r.stab)) for r in data.orbits
                 if r.membership & bit and (r.disc // 27 - spec.l) % spec.N == 0)
        return _accumulate(items, Fraction(X, 27))
    if spec.kind == "mod2":
        target = tuple(int(t) for t in spec.pattern)
        items = ((abs(P), P, w) for P, y, w in data.suborbits(GAMMA2)
                 if tuple(t % 2 for t in y) == target)
        return _accumulate(items, Fraction(X))
    if spec.kind == "box":
        if not box_is_invariant(spec.box, spec.subgroup):
            raise ValueError(f"{spec.box.name or spec.box} is not invariant under {spec.subgroup}")
        items = ((abs(P), P, w) for P, y, w in data.suborbits(spec.subgroup) if box_member(y, spec.box))
        return _accumulate(items, Fraction(X))
    if spec.kind == "lattice":
        from .lattices import is_dual, member

        if is_dual(spec.lattice):
            raise ValueError("subgroup partial zetas are only provided for primal lattices")
        items = ((abs(P), P, w) for P, y, w in data.suborbits(spec.subgroup) if member(y, spec.lattice))
        return _accumulate(items, Fraction(X))
    raise ValueError(f"unknown partial zeta kind {spec.kind!r}")


# ----------------------------------------------------------- named series

def theta(d: ZetaData) -> SeriesPair:
    return d.xi(1) - d.xi(3).scale(2) - d.xi(4) + d.xi(5).scale(4)


def eta(d: ZetaData) -> SeriesPair:
    return pow2s(2)(d.xi(4) - d.xi(2) - d.xi(5) + pow2s(-4, 2)(d.xi(1)))


def theta_dual(d: ZetaData) -> SeriesPair:
    return pow2s(2)(d.xiv(5) - d.xiv(3) - d.xiv(4) + pow2s(-4, 2)(d.xiv(1)))


def eta_dual(d: ZetaData) -> SeriesPair:
    return d.xiv(1) - d.xiv(2).scale(2) - d.xiv(5) + d.xiv(4).scale(4)


NAMED_SERIES: dict = {
    "xi1": lambda d: d.xi(1), "xi2": lambda d: d.xi(2), "xi3": lambda d: d.xi(3),
    "xi4": lambda d: d.xi(4), "xi5": lambda d: d.xi(5),
    "xi1v": lambda d: d.xiv(1), "xi2v": lambda d: d.xiv(2), "xi3v": lambda d: d.xiv(3),
    "xi4v": lambda d: d.xiv(4), "xi5v": lambda d: d.xiv(5),
    "theta": theta, "eta": eta, "theta_dual": theta_dual, "eta_dual": eta_dual,
}

# the ten sign-combined series sqrt3*first +- second
COMBINED = {
    f"{base}{'plus' if sgn > 0 else 'minus'}": (base, sgn)
    for base in ("xi1", "xi2", "xi3", "theta", "eta") for sgn in (1, -1)
}


def combined_series(d: ZetaData, name: str):
    base, sgn = COMBINED[name]
    return plus_minus(NAMED_SERIES[base](d), sgn)


# -------------------------------------------------------------- relations

class Identity(NamedTuple):
    label: str
    lhs: SeriesPair
    rhs: SeriesPair


class Predicate(NamedTuple):
    """A non-identity check: ``check(Q) -> (ok, detail)`` over the series it reads."""

    label: str
    reads: tuple
    check: Callable


def _on(d):
    return [Identity("xi1v = A xi1", d.xiv(1), apply_A(d.xi(1)))]


def _sty2(d):
    return [Identity("xi2v = A xi2", d.xiv(2), apply_A(d.xi(2)))]


def _sty3(d):
    return [Identity("xi3v = A xi3", d.xiv(3), apply_A(d.xi(3)))]


def _main_theta(d):
    return [Identity("theta_dual = A theta", theta_dual(d), apply_A(theta(d)))]


def _main_eta(d):
    return [Identity("eta_dual = A eta", eta_dual(d), apply_A(eta(d)))]


def _ksr1(d):
    return [Identity("L1[P=4 mod 32]", d.cong(4, 32), pow2s(-2, 3)(d.xi(5) - pow2s(-4)(d.xi(1))))]


def _ksr2(d):
    return [Identity("L1v[P/27=-20 mod 32]", d.congv(-20, 32), pow2s(-2, 3)(d.xiv(4) - pow2s(-4)(d.xiv(1))))]


def _ksr3(d):
    x1, x2, x3, x4, x5 = (d.xi(i) for i in range(1, 6))
    rhs = ((x4 - x2 - x5 + pow2s(-4, 2)(x1))
           + pow2s(-4)(x1 - x4 - x3.scale(2) + x5.scale(4))
           - pow2s(-2)(x1 - x3 - x2.scale(2) + pow2s(-4, 5)(x1)))
    return [Identity("L1[P=20 mod 32]", d.cong(20, 32), rhs)]


def _ksr4(d):
    v1, v2, v3, v4, v5 = (d.xiv(i) for i in range(1, 6))
    rhs = ((v5 - v3 - v4 + pow2s(-4, 2)(v1))
           + pow2s(-4)(v1 - v5 - v2.scale(2) + v4.scale(4))
           - pow2s(-2)(v1 - v2 - v3.scale(2) + pow2s(-4, 5)(v1)))
    return [Identity("L1v[P/27=-4 mod 32]", d.congv(-4, 32), rhs)]


def _mod2_set(d):
    m = d.mod2
    x = d.xi
    return [
        Identity("6 xi1", x(1).scale(6), m("0000") + m("0001").scale(3) + m("0010").scale(6) + m("0110")
                 + m("0111").scale(3) + m("1011").scale(2)),
        Identity("6 xi2", x(2).scale(6), m("0000") + m("0111").scale(3)),
        Identity("6 xi3", x(3).scale(6), m("0000") + m("0110") + m("1011").scale(2)),
        Identity("6 xi4", x(4).scale(6), m("0000") + m("0001").scale(3) + m("0110") + m("0111").scale(3)),
        Identity("6 xi5", x(5).scale(6), m("0000") + m("0110")),
        Identity("6 2^-4s xi1", pow2s(-4, 6)(x(1)), m("0000")),
    ]


def _mod2_solved(d):
    m = d.mod2
    x1, x2, x3, x4, x5 = (d.xi(i) for i in range(1, 6))
    q1 = pow2s(-4)(x1)
    return [
        Identity("xi_0000", m("0000"), q1.scale(6)),
        Identity("xi_0001", m("0001"), (x4 - x2 - x5 + q1).scale(2)),
        Identity("xi_0010", m("0010"), x1 + x5 - x3 - x4),
        Identity("xi_0110", m("0110"), (x5 - q1).scale(6)),
        Identity("xi_0111", m("0111"), (x2 - q1).scale(2)),
        Identity("xi_1011", m("1011"), (x3 - x5).scale(3)),
    ]


MOD2_CLASSES = (
    ("0000",), ("0001", "1000", "1111"), ("0010", "0100", "0011", "1100", "0101", "1010"),
    ("0110",), ("0111", "1110", "1001"), ("1011", "1101"),
)


def _mod2_classes(d):
    out = []
    for cls in MOD2_CLASSES:
        for other in cls[1:]:
            out.append(Identity(f"xi_{cls[0]} = xi_{other}", d.mod2(cls[0]), d.mod2(other)))
    return out


def _remark38(d):
    x1, x2, x3, x4, x5 = (d.xi(i) for i in range(1, 6))
    c58, c18, c432, c2032 = d.cong(5, 8), d.cong(1, 8), d.cong(4, 32), d.cong(20, 32)
    one = pow2s(0)
    rhs4 = (c2032 + (pow2s(-2) * (one - pow2s(-2)) * (one + pow2s(-4, 2)))(x1)
            + (one - pow2s(-2, 2))(c58 - pow2s(-2)(c18)
                                   + (pow2s(0, Fraction(1, 3)) * (one + pow2s(-2, 2)) * pow2s(2))(c432)))
    return [
        Identity("xi2 = L1[P=5 mod 8] + 2^-4s xi1", x2, c58 + pow2s(-4)(x1)),
        Identity("xi3 = L1[P=1 mod 8] + 2^-4s xi1", x3, c18 + pow2s(-4)(x1)),
        Identity("(1-2^-4s) xi4", (one - pow2s(-4))(x4), rhs4),
        Identity("xi5", x5, pow2s(2, Fraction(1, 3))(c432) + pow2s(-4)(x1)),
    ]


def _induction(d):
    X1, X2, X3 = (PARTITION_SETS[k] for k in ("X1", "X2", "X3"))
    return [
        Identity("xi[X1, Gamma0(2)] = L1[P=4 mod 32]", d.box(X1, GAMMA0_2), d.cong(4, 32)),
        Identity("xi[X2, Gamma0(2)] + xi[X3, Gamma0(2)] = L1[P=20 mod 32]",
                 d.box(X2, GAMMA0_2) + d.box(X3, GAMMA0_2), d.cong(20, 32)),
    ]


def _box_scaling(d):
    return [
        Identity("xi[(Z,O,2O,8Z), Gamma0(2)] = 2^-2s xi[(E,O,O,E), Gamma^0(2)]",
                 d.box(SCALED_BOXES["X1"], GAMMA0_2), pow2s(-2)(d.box(SCALED_BOXES["E,O,O,E"], GAMMA_UPPER0_2))),
        Identity("xi[(Z,O,2O,4O), Gamma0(2)] = 2^-2s xi[(E,O,O,O), Gamma^0(2)]",
                 d.box(SCALED_BOXES["X2"], GAMMA0_2), pow2s(-2)(d.box(SCALED_BOXES["E,O,O,O"], GAMMA_UPPER0_2))),
    ]


def _prop33_4(d, subgroups=(GAMMA2, GAMMA0_2, GAMMA_UPPER0_2)):
    out = []
    for sg in subgroups:
        out.append(Identity(f"xi(L1, {sg}) = {sg.index()} xi1", d.sub("L1", sg), d.xi(1).scale(sg.index())))
    return out


def _support_integrality(d):
    def make(name):
        def check(Q):
            S = NAMED_SERIES[name](d)
            for j in (1, 2):
                part = S.component(j)
                if Fraction(Q) > part.cutoff:
                    raise CutoffExceeded(f"{name} reliable only to {part.cutoff}")
                for q, c in part.items():
                    if q <= Q and c and q.denominator != 1:
                        return False, {"q": f"{q.numerator}/{q.denominator}", "component": j,
                                       "lhs": str(c), "rhs": "0"}
            return True, None

        return Predicate(f"{name} has integral support", (name,), check)

    return [make(n) for n in ("theta", "eta", "theta_dual", "eta_dual")]


def _gcd_support(d):
    def make(name):
        def check(Q):
            S = combined_series(d, name)
            if Fraction(Q) > S.cutoff:
                raise CutoffExceeded(f"{name} reliable only to {S.cutoff}")
            g = support_gcd(S, Q)
            return (g == 1), (None if g == 1 else {"q": "gcd", "component": 0, "lhs": str(g), "rhs": "1"})

        return Predicate(f"gcd of support of {name} is 1", (name,), check)

    return [make(n) for n in COMBINED]


RELATIONS: dict = {
    "ON": (_on, 300),
    "STY2": (_sty2, 300),
    "STY3": (_sty3, 300),
    "MAIN_THETA": (_main_theta, 100),
    "MAIN_ETA": (_main_eta, 100),
    "KSR1": (_ksr1, 100),
    "KSR2": (_ksr2, 100),
    "KSR3": (_ksr3, 100),
    "KSR4": (_ksr4, 100),
    "MOD2_SET": (_mod2_set, 100),
    "MOD2_SOLVED": (_mod2_solved, 100),
    "MOD2_CLASSES": (_mod2_classes, 100),
    "REMARK38": (_remark38, 100),
    "INDUCTION": (_induction, 100),
    "BOX_SCALING": (_box_scaling, 100),
    "PROP33_4": (_prop33_4, 50),
    "SUPPORT_INTEGRALITY": (_support_integrality, 100),
    "GCD_SUPPORT": (_gcd_support, 1000),
}


def default_cutoff(rel: str) -> int:
    return RELATIONS[rel][1]


def _series_cutoffs(checks, d) -> Fraction:
    cut = None
    for chk in checks:
        if isinstance(chk, Identity):
            c = min(chk.lhs.cutoff, chk.rhs.cutoff)
        else:
            c = min(
                (combined_series(d, n).cutoff if n in COMBINED else NAMED_SERIES[n](d).cutoff) for n in chk.reads
            )
        cut = c if cut is None else min(cut, c)
    return cut


def required_cutoff(rel: str, Q) -> int:
    """Smallest orbit cutoff X (bound on |P|) for which ``rel`` can be checked up to Q.

    Every series used is linear in X (primal cutoff X, dual X/27, twists
    rescale), so one probe on empty data at X = 1 gives the factor.
    """
    probe = ZetaData([], 1)
    factor = _series_cutoffs(RELATIONS[rel][0](probe), probe)
    return max(1, math.ceil(Fraction(Q) / factor))


def cutoff_arithmetic(rel: str, Q) -> str:
    X = required_cutoff(rel, Q)
    probe = ZetaData([], 1)
    RELATIONS[rel][0](probe)
    duals = any("v" in n.split("@")[0] for n in probe.accessed)
    return f"{rel}: cutoff {Q} needs orbits with |P| <= {X}" + (" (dual side indexed by |P|/27)" if duals else "")


@dataclass
class Report:
    relation: str
    cutoff: int
    status: str
    first_discrepancy: dict | None
    wall_time_ms: float | None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self, timing: bool = True) -> dict:
        out = {"relation": self.relation, "cutoff": self.cutoff, "status": self.status,
               "first_discrepancy": self.first_discrepancy,
               "wall_time_ms": round(self.wall_time_ms, 3) if timing and self.wall_time_ms is not None else None}
        if self.detail:
            out["detail"] = self.detail
        return out


def verify(rel: str, Q=None, data: ZetaData | None = None) -> Report:
    """Check ``rel`` coefficientwise for all indices ``q <= Q``."""
    if rel not in RELATIONS:
        raise KeyError(f"unknown relation {rel!r}")
    Q = default_cutoff(rel) if Q is None else Q
    need = required_cutoff(rel, Q)
    if data is None or data.X < need:
        have = None if data is None else data.X
        raise InsufficientCutoff(f"{rel} at cutoff {Q} needs orbits to |P| <= {need}, have {have}")
    t0 = time.perf_counter()
    d = data.limited(need)
    checks = RELATIONS[rel][0](d)
    for chk in checks:
        if isinstance(chk, Identity):
            ok, disc = equal_up_to(chk.lhs, chk.rhs, Q)
            if not ok:
                info = disc.as_dict()
                info["identity"] = chk.label
                return Report(rel, Q, "fail", info, (time.perf_counter() - t0) * 1000)
        else:
            ok, info = chk.check(Q)
            if not ok:
                info = dict(info or {})
                info["identity"] = chk.label
                return Report(rel, Q, "fail", info, (time.perf_counter() - t0) * 1000)
    return Report(rel, Q, "pass", None, (time.perf_counter() - t0) * 1000)


def verify_prop33_4(cutoff=50, data: ZetaData | None = None) -> Report:
    return verify("PROP33_4", cutoff, data)


def series_used(rel: str) -> set:
    """Names of the base series ``rel`` reads (for mutation testing)."""
    probe = ZetaData([], 1)
    _series_cutoffs(RELATIONS[rel][0](probe), probe)
    return set(probe.accessed)
