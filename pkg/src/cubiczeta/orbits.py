"""SL2(Z)-orbits of integral binary cubic forms: reduction, enumeration, oracle, cache."""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernel
from .congruence import SubgroupSpec, coset_representatives
from .forms import IDENTITY, SMALL_SL2, TAU, BinaryCubicForm, GroupElement, act_int, discriminant, hessian
from .lattices import membership_mask


class ReductionError(RuntimeError):
    pass


class CacheError(ValueError):
    """Cache file is unreadable, truncated or fails its checksum."""


@dataclass(frozen=True)
class OrbitRecord:
    rep: BinaryCubicForm
    disc: int
    stab: int
    membership: int

    def line(self) -> str:
        a, b, c, d = self.rep
        return f"{self.disc},{self.stab},{a},{b},{c},{d},{self.membership}"

    @classmethod
    def parse(cls, line: str) -> "OrbitRecord":
        parts = line.strip().split(",")
        if len(parts) != 7:
            raise CacheError(f"malformed record {line!r}")
        P, st, a, b, c, d, m = (int(t) for t in parts)
        return cls(BinaryCubicForm(a, b, c, d), P, st, m)


def form_key(x) -> tuple:
    a, b, c, d = x
    return (abs(a), a, abs(b), b, abs(c), c, abs(d), d)


def record_order(rec: OrbitRecord) -> tuple:
    return (abs(rec.disc), rec.disc < 0, form_key(rec.rep))


# ---------------------------------------------------------------- reduction

def _translate(n: int) -> GroupElement:
    # moves the reduction point by z -> z - n
    return GroupElement(1, 0, n, 1)


def _complex_root(x) -> complex:
    a, b, c, d = (float(t) for t in x)
    if a == 0:
        roots = np.roots([b, c, d])
    else:
        roots = np.roots([a, b, c, d])
    z = max(roots, key=lambda r: abs(r.imag))
    return complex(z.real, abs(z.imag))


def _complex_root_mp(x) -> complex:
    import mpmath

    with mpmath.workdps(60):
        coeffs = [int(t) for t in x]
        if coeffs[0] == 0:
            coeffs = coeffs[1:]
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
        z = max(roots, key=lambda r: abs(mpmath.im(r)))
        return complex(float(mpmath.re(z)), abs(float(mpmath.im(z))))


def _reduce_positive(x, g):
    while True:
        A, B, C = hessian(x)
        if A < 0:
            A, B, C = -A, -B, -C
        # Hessian root z = (-B + i sqrt(3P)) / (2A); shift Re z into [-1/2, 1/2)
        n = (A - B) // (2 * A)
        if n:
            t = _translate(n)
            x, g = act_int(t, x), t @ g
            A, B, C = hessian(x)
            if A < 0:
                A, B, C = -A, -B, -C
        if C < A:
            x, g = act_int(TAU, x), TAU @ g
            continue
        return x, g


def _reduce_negative(x, g, root=_complex_root):
    for _ in range(10000):
        z = root(x)
        n = round(z.real)
        if n:
            t = _translate(n)
            x, g = act_int(t, x), t @ g
            z = root(x)
        if abs(z) ** 2 < 1 - 1e-9:
            x, g = act_int(TAU, x), TAU @ g
            continue
        return x, g
    raise ReductionError(f"float reduction did not converge for {x}")


def _fix_up(x, g, P):
    if kernel.reduced_state(*x, P):
        return x, g
    for h in SMALL_SL2:
        y = act_int(h, x)
        if kernel.reduced_state(*y, P):
            return y, h @ g
    return None


def reduce_with_transform(x) -> tuple:
    """``(y, g)`` with ``y = g . x`` reduced (reduction point in the closed fundamental domain)."""
    x = tuple(int(t) for t in x)
    P = discriminant(x)
    if P == 0:
        raise ValueError("degenerate form (zero discriminant)")
    if P > 0:
        y, g = _reduce_positive(x, IDENTITY)
        return y, g
    big = max(abs(t) for t in x) > 2 ** 40
    y, g = _reduce_negative(x, IDENTITY, _complex_root_mp if big else _complex_root)
    fixed = _fix_up(y, g, P)
    if fixed is None:
        y, g = _reduce_negative(y, g, _complex_root_mp)
        fixed = _fix_up(y, g, P)
    if fixed is None:
        raise ReductionError(f"could not reduce {x}")
    return fixed


def _canonical_among(y, P) -> tuple:
    best, best_h = None, None
    for h in SMALL_SL2:
        z = act_int(h, y)
        if kernel.reduced_state(*z, P):
            if best is None or form_key(z) < form_key(best):
                best, best_h = z, h
    return best, best_h


def canonical_with_transform(x) -> tuple:
    """``(rep, g)``: canonical representative of the orbit of ``x`` and ``g`` with ``rep = g . x``."""
    y, g = reduce_with_transform(x)
    P = discriminant(y)
    rep, h = _canonical_among(y, P)
    return BinaryCubicForm(*rep), h @ g


def canonicalize(x) -> BinaryCubicForm:
    return canonical_with_transform(x)[0]


def reduce(x) -> BinaryCubicForm:
    """Canonical reduced representative of the SL2(Z)-orbit of ``x``."""
    return canonicalize(x)


def stabilizer_elements(x) -> list:
    """Elements of SL2(Z) fixing ``x``."""
    x = tuple(int(t) for t in x)
    y, g = reduce_with_transform(x)
    ginv = g.inverse()
    return [ginv @ h @ g for h in SMALL_SL2 if act_int(h, y) == y]


def stabilizer_order(x) -> int:
    return len(stabilizer_elements(x))


def same_orbit(x, y) -> bool:
    return canonicalize(x) == canonicalize(y)


# -------------------------------------------------------------- enumeration

def _scan(job):
    X, sign, part, nparts = job
    fn = kernel.scan_positive if sign > 0 else kernel.scan_negative
    return fn(X, part, nparts)


def _records_from_scan(rows) -> list:
    out = []
    for P, st, a, b, c, d in rows:
        y = (a, b, c, d)
        if st == kernel.INTERIOR:
            rep = (-a, -b, -c, -d)
            stab = 1
        else:
            rep, _ = _canonical_among(y, P)
            if rep != y and rep != (-a, -b, -c, -d):
                continue
            stab = sum(1 for h in SMALL_SL2 if act_int(h, y) == y)
        out.append(OrbitRecord(BinaryCubicForm(*rep), P, stab, membership_mask(rep)))
    return out


def enumerate_orbits(X: int, workers: int = 1) -> list:
    """Every SL2(Z)-orbit with ``0 < |P| <= X``, one canonical record each, in cache order."""
    if X < 1:
        return []
    if X > kernel.MAX_CUTOFF and kernel.IMPLEMENTATION != "python":
        raise ValueError(f"cutoff {X} exceeds the compiled kernel's safe range {kernel.MAX_CUTOFF}")
    workers = max(1, int(workers))
    jobs = [(X, sign, part, workers) for sign in (1, -1) for part in range(workers)]
    if workers == 1:
        chunks = [_scan(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_scan, jobs))
    records = []
    for rows in chunks:
        records.extend(_records_from_scan(rows))
    records.sort(key=record_order)
    return records


# ------------------------------------------------------------ brute force

# S, T, T^-1, U, U^-1 (U the lower unipotent, which keeps a = 0 forms in their cusp)
_STEPS = (TAU, GroupElement(1, 1, 0, 1), GroupElement(1, -1, 0, 1),
          GroupElement(1, 0, 1, 1), GroupElement(1, 0, -1, 1))
_MINUS_I = GroupElement(-1, 0, 0, -1)
_ORDER_THREE = tuple(h for h in SMALL_SL2 if h.p + h.s == -1)


class BoxTooSmall(RuntimeError):
    pass


def _apply(g, F):
    return np.stack(act_int(g, F.T), axis=1)


def _norm(F):
    return 3 * F[:, 0] ** 2 + F[:, 1] ** 2 + F[:, 2] ** 2 + 3 * F[:, 3] ** 2


def _descend(F):
    """Greedy strict descent of a coefficient norm along generator steps."""
    F = F.copy()
    active = np.arange(len(F))
    while len(active):
        cur = F[active]
        best, bestn = cur, _norm(cur)
        for g in _STEPS:
            nb = _apply(g, cur)
            nn = _norm(nb)
            better = nn < bestn
            best = np.where(better[:, None], nb, best)
            bestn = np.where(better, nn, bestn)
        moved = (best != cur).any(axis=1)
        F[active] = best
        active = active[moved]
    return F


def _components(X: int, B: int) -> dict:
    """disc -> sorted list of (stab, smallest rep) over every orbit met in the box.

    Nodes are the box forms with ``0 < |P| <= X`` plus the end points of a
    norm descent started at each of them; edges join generator neighbours and
    each form to its descent end point.  No fundamental domain is used.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    D = B + X // 4
    grid = np.meshgrid(np.arange(-B, B + 1), np.arange(-B, B + 1), np.arange(-B, B + 1),
                       np.arange(-D, D + 1), indexing="ij")
    a, b, c, d = (t.ravel().astype(np.int64) for t in grid)
    P = b * b * c * c + 18 * a * b * c * d - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d
    keep = (P != 0) & (np.abs(P) <= X)
    box = np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1)
    n = len(box)
    ends = _descend(box)
    nodes, inv = np.unique(np.vstack([box, ends]), axis=0, return_inverse=True)
    inv = inv.ravel()
    m = len(nodes)
    M = int(np.abs(nodes).max()) + 1
    W = 2 * M + 1

    def encode(F):
        inside = (np.abs(F) < M).all(axis=1)
        G = F + M
        return ((G[:, 0] * W + G[:, 1]) * W + G[:, 2]) * W + G[:, 3], inside

    codes, _ = encode(nodes)  # sorted, since np.unique sorts rows lexicographically
    rows = [inv[:n]]
    cols = [inv[n:]]
    jumps = []
    for k in range(2, B + 1):
        jumps += [GroupElement(1, k, 0, 1), GroupElement(1, 0, k, 1)]
    for g in _STEPS + (_MINUS_I,) + tuple(jumps):
        code2, inside = encode(_apply(g, nodes))
        pos = np.clip(np.searchsorted(codes, code2), 0, m - 1)
        hit = inside & (codes[pos] == code2)
        rows.append(np.nonzero(hit)[0])
        cols.append(pos[hit])
    r = np.concatenate(rows)
    cidx = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, cidx)), shape=(m, m))
    ncomp, labels = connected_components(graph, directed=False)

    fixed3 = np.zeros(m, dtype=bool)
    for h in _ORDER_THREE:
        fixed3 |= (_apply(h, nodes) == nodes).all(axis=1)
    stab3 = np.zeros(ncomp, dtype=bool)
    np.logical_or.at(stab3, labels, fixed3)

    best: dict = {}
    for i in range(m):
        x = tuple(int(t) for t in nodes[i])
        lab = labels[i]
        cur = best.get(lab)
        if cur is None or form_key(x) < form_key(cur):
            best[lab] = x
    out: dict = {}
    for lab, x in best.items():
        out.setdefault(discriminant(x), []).append((3 if stab3[lab] else 1, x))
    for v in out.values():
        v.sort()
    return out


def brute_force_orbits(X: int, B: int = 20, check: bool = True) -> list:
    """Independent oracle: connected components of the generator graph on a coefficient box.

    With ``check`` the box is shrunk by 5 and the per-discriminant orbit
    counts must agree, otherwise BoxTooSmall is raised.
    """
    comps = _components(X, B)
    if check:
        small = _components(X, max(B - 5, 1))
        sig = {P: [s for s, _ in v] for P, v in comps.items()}
        sig_small = {P: [s for s, _ in v] for P, v in small.items()}
        if sig != sig_small:
            raise BoxTooSmall(f"orbit census not stable between B={B - 5} and B={B}")
    records = []
    for P, v in comps.items():
        for stab, x in v:
            records.append(OrbitRecord(BinaryCubicForm(*x), P, stab, membership_mask(x)))
    records.sort(key=record_order)
    return records


# ------------------------------------------------- congruence decomposition

@dataclass(frozen=True)
class SubOrbit:
    rep: BinaryCubicForm
    stab: int  # |Gamma'_y|
    coset: GroupElement


def decompose_orbit(rep, spec: SubgroupSpec) -> list:
    """Split the SL2(Z)-orbit of ``rep`` into Gamma'-orbits.

    Returns one SubOrbit per double coset ``Gamma' g Stab(rep)``; the sum of
    ``|Stab(rep)| / sub.stab`` over the pieces equals the index.
    """
    rep = tuple(int(t) for t in rep)
    n = spec.level
    stab = stabilizer_elements(rep)
    cosets = coset_representatives(spec)

    def coset_of(g):
        for i, k in enumerate(cosets):
            # Gamma' g == Gamma' k  iff  g k^-1 in Gamma'
            if spec.contains_residue((g @ k.inverse()).mod(n)):
                return i
        raise AssertionError("coset lookup failed")

    seen: set = set()
    out = []
    for i, g in enumerate(cosets):
        if i in seen:
            continue
        orbit = {coset_of(g @ s) for s in stab}
        seen |= orbit
        # y = g^{-1}-conjugated representative: Gamma'-orbit of g . rep
        y = act_int(g, rep)
        sub = sum(1 for s in stab if spec.contains_residue((g @ s @ g.inverse()).mod(n)))
        out.append(SubOrbit(BinaryCubicForm(*y), sub, g))
    return out


# ------------------------------------------------------------------- cache

HEADER = "cubiczeta-orbits v1 cutoff={X}"


@dataclass
class EnumerationManifest:
    cutoff: int
    counts: dict
    sha256: str
    segments: list

    def to_json(self) -> str:
        return json.dumps(
            {"cutoff": self.cutoff, "counts": self.counts, "sha256": self.sha256, "segments": self.segments},
            indent=2, sort_keys=True,
        )


def manifest_path(cache: Path) -> Path:
    cache = Path(cache)
    return cache.with_name(cache.name + ".manifest.json")


def _digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _counts(records) -> dict:
    pos = sum(1 for r in records if r.disc > 0)
    return {"orbits": len(records), "positive": pos, "negative": len(records) - pos}


def write_cache(path, records, X: int, append: bool = False) -> EnumerationManifest:
    """Write (or append a segment of) orbit records plus a manifest beside the file."""
    path = Path(path)
    mode = "a" if append and path.exists() else "w"
    segments = []
    if mode == "a":
        old = read_manifest(path)
        segments = list(old.segments)
        verify_checksum(path, old)
    with open(path, mode, encoding="ascii", newline="\n") as fh:
        fh.write(HEADER.format(X=X) + "\n")
        for rec in records:
            fh.write(rec.line() + "\n")
    segments.append(X)
    all_records = read_records(path, verify=False)
    man = EnumerationManifest(max(segments), _counts(all_records), _digest(path), segments)
    manifest_path(path).write_text(man.to_json() + "\n", encoding="ascii")
    return man


def read_manifest(path) -> EnumerationManifest:
    mp = manifest_path(path)
    try:
        raw = json.loads(mp.read_text(encoding="ascii"))
        return EnumerationManifest(int(raw["cutoff"]), dict(raw["counts"]), str(raw["sha256"]),
                                   list(raw.get("segments", [raw["cutoff"]])))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CacheError(f"cannot read manifest {mp}: {exc}") from exc


def verify_checksum(path, manifest: EnumerationManifest | None = None) -> None:
    manifest = manifest or read_manifest(path)
    if _digest(Path(path)) != manifest.sha256:
        raise CacheError(f"checksum mismatch for {path}")


def read_records(path, verify: bool = True) -> list:
    """Records from every segment; later segments supersede earlier ones per orbit."""
    path = Path(path)
    if verify:
        verify_checksum(path)
    records: dict = {}
    try:
        text = path.read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise CacheError(f"cannot read cache {path}: {exc}") from exc
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith("cubiczeta-orbits"):
            if not line.startswith("cubiczeta-orbits v1 cutoff="):
                raise CacheError(f"unknown cache header {line!r}")
            continue
        try:
            rec = OrbitRecord.parse(line)
        except ValueError as exc:
            raise CacheError(str(exc)) from exc
        records[(rec.disc, rec.rep)] = rec
    return sorted(records.values(), key=record_order)


def load_or_enumerate(X: int, cache=None, workers: int = 1) -> list:
    """Orbits up to X, reusing (and extending) a cache file when given."""
    cache = cache or os.environ.get("CUBICZETA_CACHE")
    if not cache:
        return enumerate_orbits(X, workers)
    cache = Path(cache)
    if cache.exists():
        man = read_manifest(cache)
        recs = read_records(cache)
        if man.cutoff >= X:
            return [r for r in recs if abs(r.disc) <= X]
        fresh = [r for r in enumerate_orbits(X, workers) if abs(r.disc) > man.cutoff]
        write_cache(cache, fresh, X, append=True)
        return read_records(cache)
    recs = enumerate_orbits(X, workers)
    write_cache(cache, recs, X)
    return recs
