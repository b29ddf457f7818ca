import random
from collections import Counter
from fractions import Fraction

import pytest

from cubiczeta import kernel
from cubiczeta.congruence import GAMMA0, SubgroupSpec
from cubiczeta.forms import TAU, act, act_int, discriminant, random_sl2z
from cubiczeta.orbits import (CacheError, OrbitRecord, brute_force_orbits, canonicalize, decompose_orbit,
                              enumerate_orbits, load_or_enumerate, read_manifest, read_records, reduce,
                              same_orbit, stabilizer_order, write_cache)
from cubiczeta.relations import GAMMA1, GAMMA2


def _multiset(records):
    return Counter((r.disc, r.stab, r.membership) for r in records)


def _random_forms(n, bound, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        x = tuple(rng.randint(-bound, bound) for _ in range(4))
        if discriminant(x) != 0:
            out.append(x)
    return out


def test_reduce_tau_invariant_and_idempotent():
    for x in _random_forms(1000, 20, 7):
        r = reduce(x)
        assert r == reduce(act(TAU, x))
        assert reduce(r) == r
        assert discriminant(r) == discriminant(x)


def test_canonical_form_is_orbit_invariant():
    rng = random.Random(3)
    for x in _random_forms(300, 12, 11):
        g = random_sl2z(rng, 12)
        assert canonicalize(act_int(g, x)) == canonicalize(x)


def test_small_cutoffs():
    one = enumerate_orbits(1)
    assert [(r.disc, r.stab) for r in one] == [(1, 3)]
    assert same_orbit(one[0].rep, (0, 1, 1, 0))
    assert not any(abs(r.disc) == 2 for r in enumerate_orbits(2))


def test_discriminants_are_0_or_1_mod_4(orbits_full):
    assert all(r.disc % 4 in (0, 1) for r in orbits_full)


def test_negative_orbits_have_trivial_stabilizer(orbits_full):
    assert all(r.stab == 1 for r in orbits_full if r.disc < 0)
    assert all(r.membership & 1 for r in orbits_full)


def test_oracle_small():
    bf = brute_force_orbits(1, B=8)
    assert len(bf) == 1 and same_orbit(bf[0].rep, (0, 1, 1, 0))
    bf27 = brute_force_orbits(27, B=10)
    hits = [r for r in bf27 if same_orbit(r.rep, (1, 0, 0, 1))]
    assert len(hits) == 1 and hits[0].stab == 1 and hits[0].disc == -27


def test_oracle_matches_enumeration_100():
    assert _multiset(enumerate_orbits(100)) == _multiset(brute_force_orbits(100, B=15))


def test_orbit_records_are_canonical(orbits_full):
    for r in orbits_full[:3000]:
        assert canonicalize(r.rep) == r.rep
        assert discriminant(r.rep) == r.disc
        assert stabilizer_order(r.rep) == r.stab


def test_stabilizer_examples():
    assert stabilizer_order((1, 0, 0, 1)) == 1
    assert stabilizer_order((0, 1, 1, 0)) == 3
    assert stabilizer_order((1, -3, 0, 1)) == 3


def test_decompose_orbit():
    x = (1, 0, 0, 1)
    assert [(p.rep, p.stab) for p in decompose_orbit(x, GAMMA1)] == [(x, 1)]
    pieces = decompose_orbit(x, GAMMA2)
    assert len(pieces) == 6 and all(p.stab == 1 for p in pieces)
    y = (0, 1, 1, 0)
    pieces = decompose_orbit(y, GAMMA2)
    assert sum(Fraction(3, p.stab) for p in pieces) == 6


@pytest.mark.parametrize("spec", [GAMMA2, SubgroupSpec(GAMMA0, 2), SubgroupSpec(GAMMA0, 4)])
def test_decompose_weights_sum_to_index(orbits_full, spec):
    index = spec.index()
    for r in orbits_full[:400]:
        pieces = decompose_orbit(r.rep, spec)
        assert sum(Fraction(r.stab, p.stab) for p in pieces) == index


def test_kernels_agree():
    impls = kernel.implementations()
    if len(impls) < 2:
        pytest.skip("compiled kernel not built")
    X = 30000
    ref = sorted(impls["python"].scan_positive(X) + impls["python"].scan_negative(X))
    got = sorted(impls["cython"].scan_positive(X) + impls["cython"].scan_negative(X))
    assert ref == got


def test_workers_do_not_change_output():
    assert enumerate_orbits(5000, workers=3) == enumerate_orbits(5000)


def test_record_line_roundtrip(orbits_full):
    for r in orbits_full[:200]:
        assert OrbitRecord.parse(r.line()) == r


def test_cache_roundtrip_and_extension(tmp_path):
    path = tmp_path / "orbits.csv"
    recs = enumerate_orbits(2000)
    man = write_cache(path, recs, 2000)
    assert man.counts["orbits"] == len(recs)
    assert read_records(path) == recs
    # extension appends a new segment and equals a fresh run
    ext = load_or_enumerate(4000, path)
    assert ext == enumerate_orbits(4000)
    assert read_manifest(path).segments == [2000, 4000]
    before = path.read_bytes()
    assert load_or_enumerate(3000, path) == [r for r in ext if abs(r.disc) <= 3000]
    assert path.read_bytes() == before


def test_cache_corruption_detected(tmp_path):
    path = tmp_path / "orbits.csv"
    write_cache(path, enumerate_orbits(500), 500)
    lines = path.read_text().splitlines()
    lines[3] = lines[3].replace("1", "2", 1)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CacheError):
        read_records(path)
