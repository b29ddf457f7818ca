from fractions import Fraction

import pytest

from cubiczeta.lattices import (DUAL_PARTNER, LATTICES, InsufficientCutoff, build_tables, lattice_index, member,
                                membership_mask)
from cubiczeta.orbits import enumerate_orbits


def test_membership_examples():
    assert not member((1, 0, 0, 1), "L5")
    assert member((2, 0, 0, 2), "L5") and member((2, 0, 0, 2), "L4")
    assert member((1, 3, 3, 1), "L1v")
    assert not member((1, 3, 3, 1), "L2v")


def test_indices():
    assert lattice_index("L1") == 1
    assert lattice_index("L4") == 2
    assert lattice_index("L2") == 4
    assert lattice_index("L5") == 8
    # a dual lattice has the same index as its partner
    for dual, primal in DUAL_PARTNER.items():
        assert lattice_index(dual) == lattice_index(primal)


def test_inclusions_consistent_with_masks(orbits_full):
    for r in orbits_full[:5000]:
        m = r.membership
        if m >> 4 & 1:  # L5 inside L4
            assert m >> 3 & 1
        assert m == membership_mask(r.rep)


def test_dual_discriminants_divisible_by_27(orbits_full):
    for r in orbits_full:
        if r.membership >> 5 & 1:
            assert r.disc % 27 == 0


def test_tables(orbits_full):
    X = 3000
    recs = [r for r in orbits_full if abs(r.disc) <= X]
    tables = build_tables(recs, X)
    assert set(tables) == set(LATTICES)
    assert tables["L1"].h(1) == (Fraction(1, 3), 0)
    assert tables["L1v"].cutoff == Fraction(X, 27)
    for name, t in tables.items():
        for n, (hp, hm) in t.rows.items():
            assert hp.denominator in (1, 3)
            assert hm.denominator == 1
            if not name.endswith("v"):
                assert n % 4 != 2
                assert not hp or n % 4 in (0, 1)
                assert not hm or n % 4 in (0, 3)


def test_table_cutoff_enforced():
    recs = enumerate_orbits(270)
    with pytest.raises(InsufficientCutoff):
        build_tables(recs, 270, {"L1v": 11})
    tables = build_tables(recs, 270, {"L1": 100, "L1v": 10})
    assert max(tables["L1"].rows) <= 100


def test_table_csv(orbits_full):
    t = build_tables([r for r in orbits_full if abs(r.disc) <= 50], 50)["L1"]
    lines = t.to_csv().splitlines()
    assert lines[0] == "lattice,n,h_plus_num,h_plus_den,h_minus_num,h_minus_den"
    assert lines[1] == "L1,1,1,3,0,1"
