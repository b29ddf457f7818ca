import random

from cubiczeta.congruence import GAMMA, GAMMA0, GAMMA_UPPER0, PARTITION_SETS, SubgroupSpec, sl2_mod
from cubiczeta.finite import (FINITE_CHECKS, MOD2_CLASSES, _image_set, _residue_set, check_counting_lemma,
                              check_induction_criterion, check_L1_mod2_orbits, check_lemma_mod16,
                              check_mod2_membership_counts, check_partition_mod32, counting_lemma_sum,
                              lattice_mod2_classes, mod16_conditions, mod2_orbits, run_all)
from cubiczeta.forms import SIGMA, TAU, discriminant


def test_lemma_mod16():
    rep = check_lemma_mod16()
    assert rep.passed and rep.universe == 16 ** 4


def test_mod16_spot_cases():
    assert discriminant((1, 1, 1, 1)) == -16 and -16 % 16 != 4
    assert not mod16_conditions(1, 1, 1, 1)[0]
    assert discriminant((0, 2, 1, 0)) % 16 == 4
    conds = mod16_conditions(0, 2, 1, 0)
    assert conds[2] and sum(map(bool, conds)) == 1


def test_partition_mod32():
    rep = check_partition_mod32()
    assert rep.passed and rep.universe == 32 ** 4


def test_primed_sets_are_translates():
    for base in ("X1", "X2", "X3"):
        assert _image_set(TAU, PARTITION_SETS[base], 32) == _residue_set(PARTITION_SETS[base + "'"], 32)
        assert _image_set(SIGMA, PARTITION_SETS[base], 32) == _residue_set(PARTITION_SETS[base + "''"], 32)


def test_induction_criterion():
    rep = check_induction_criterion()
    assert rep.passed
    assert "SL2(Z/8)" in rep.detail
    assert len(sl2_mod(8)) == 384


def test_subgroup_indices():
    assert SubgroupSpec(GAMMA, 1).index() == 1
    assert SubgroupSpec(GAMMA, 2).index() == 6
    assert SubgroupSpec(GAMMA0, 2).index() == 3
    assert SubgroupSpec(GAMMA_UPPER0, 2).index() == 3
    assert SubgroupSpec(GAMMA0, 4).index() == 6


def test_mod2_orbits():
    assert check_L1_mod2_orbits().passed
    orbits = mod2_orbits()
    assert len(orbits) == 6
    assert ("0001", "1000", "1111") in orbits
    six = [o for o in orbits if "0010" in o][0]
    assert set(six) == {"0010", "0100", "0011", "1100", "0101", "1010"}
    assert sorted(map(len, orbits)) == sorted(map(len, MOD2_CLASSES))


def test_counting_lemma_degenerate_cases():
    G = sl2_mod(2)
    x = (1, 0, 0, 1)
    total, index = counting_lemma_sum(G, [(1, 0, 0, 1)], x, 2)
    assert total == index == len(G)
    total, index = counting_lemma_sum(G, G, x, 2)
    assert total == index == 1


def test_counting_lemma_random():
    rep = check_counting_lemma(100, seed=5)
    assert rep.passed and rep.universe == 100


def test_mod2_membership_counts():
    assert check_mod2_membership_counts().passed
    assert set(lattice_mod2_classes("L2")) == {"0000", "0111", "1110", "1001"}
    assert set(lattice_mod2_classes("L5")) == {"0000", "0110"}
    assert lattice_mod2_classes("2L1") == ["0000"]


def test_run_all():
    reps = run_all(seed=random.Random(0).randint(0, 100))
    assert [r.name for r in reps] == list(FINITE_CHECKS)
    assert all(r.passed for r in reps)
    d = reps[0].as_dict(timing=False)
    assert d["status"] == "pass" and d["wall_time_ms"] is None
