import random

import pytest

from cubiczeta.congruence import GAMMA0, PARTITION_SETS, SubgroupSpec
from cubiczeta.lattices import InsufficientCutoff
from cubiczeta.relations import (COMBINED, GAMMA0_2, GAMMA2, GAMMA_UPPER0_2, RELATIONS, SCALED_BOXES,
                                 PartialZetaSpec, ZetaData, box_is_invariant, combined_series, cutoff_arithmetic,
                                 partial_zeta, required_cutoff, series_used, verify, verify_prop33_4)
from cubiczeta.series import DirichletSeries, equal_up_to, pow2s, support_gcd


def test_required_cutoffs():
    assert required_cutoff("ON", 300) == 8100
    assert required_cutoff("STY2", 300) == 8100
    assert required_cutoff("MAIN_ETA", 100) == 2700
    assert required_cutoff("MAIN_THETA", 100) == 10800
    assert required_cutoff("KSR1", 100) == 100
    assert "8100" in cutoff_arithmetic("ON", 300)


def test_insufficient_data_is_refused(data_small):
    with pytest.raises(InsufficientCutoff, match="8100"):
        verify("ON", 300, data_small.limited(8000))


@pytest.mark.parametrize("rel", sorted(RELATIONS))
def test_relation_passes_at_default_cutoff(data_full, rel):
    rep = verify(rel, None, data_full)
    assert rep.passed, rep.as_dict()


def test_main_eta_at_200(data_full):
    assert verify("MAIN_ETA", 200, data_full).passed


def test_theta_dual_at_200(data_full):
    assert verify("MAIN_THETA", 200, data_full).passed


def test_gcd_support_1000(data_full):
    rep = verify("GCD_SUPPORT", 1000, data_full)
    assert rep.passed and rep.cutoff == 1000


def test_prop33_4(data_full):
    assert verify_prop33_4(50, data_full).passed
    assert SubgroupSpec(GAMMA0, 2).index() == 3
    empty = ZetaData([], 100)
    assert verify_prop33_4(50, empty).passed


def test_partial_zeta_examples(data_full):
    d = data_full.limited(12000)
    assert equal_up_to(partial_zeta(PartialZetaSpec.congruence(0, 1), d), d.xi(1), 100)[0]
    assert equal_up_to(d.mod2("0000"), pow2s(-4, 6)(d.xi(1)), 100)[0]
    assert equal_up_to(d.cong(5, 8), d.xi(2) - pow2s(-4)(d.xi(1)), 200)[0]


def test_boxes_are_invariant():
    for name in ("X1", "X2", "X3"):
        assert box_is_invariant(PARTITION_SETS[name], GAMMA0_2)
    assert box_is_invariant(SCALED_BOXES["E,O,O,E"], GAMMA_UPPER0_2)
    assert not box_is_invariant(PARTITION_SETS["X1"], SubgroupSpec(GAMMA0, 1))
    assert box_is_invariant(PARTITION_SETS["X1"], GAMMA2)


def test_report_shape(data_full):
    rep = verify("ON", 300, data_full)
    d = rep.as_dict()
    assert set(d) == {"relation", "cutoff", "status", "first_discrepancy", "wall_time_ms"}
    assert d["status"] == "pass" and d["first_discrepancy"] is None and d["wall_time_ms"] >= 0
    assert rep.as_dict(timing=False)["wall_time_ms"] is None


def test_bumped_dual_coefficient_is_reported(data_full):
    rep = verify("ON", 300, data_full.mutated("L1v@Gamma(1)", 1, 17, 1))
    assert not rep.passed
    assert rep.first_discrepancy["q"] == "17" and rep.first_discrepancy["component"] == 1


def test_random_mutations_are_caught(data_full):
    # at Q = 384 every twist used shifts an index by at most 2^6, so a bump at q <= 6 stays in range
    rng = random.Random(2024)
    rels = [r for r in RELATIONS if r not in ("GCD_SUPPORT", "SUPPORT_INTEGRALITY")]
    for _ in range(50):
        rel = rng.choice(rels)
        name = rng.choice(sorted(series_used(rel)))
        j, q = rng.choice((1, 2)), rng.randint(1, 6)
        rep = verify(rel, 384, data_full.mutated(name, j, q, 1))
        assert not rep.passed, (rel, name, j, q)


def test_support_integrality_mutation(data_full):
    # xi4 enters eta through 2^{2s}, so a bump at q = 1 creates a coefficient at 1/4
    rep = verify("SUPPORT_INTEGRALITY", 100, data_full.mutated("L4@Gamma(1)", 1, 1, 1))
    assert not rep.passed and rep.first_discrepancy["q"] == "1/4"


def test_gcd_mutation_control(data_full):
    # keep only even indices of xi1plus; even discriminants are 0 mod 4, so the gcd becomes 4
    d = data_full.limited(1000)
    S = combined_series(d, "xi1plus")
    even = {q: c for q, c in S.coeffs.items() if q % 2 == 0}
    assert support_gcd(DirichletSeries(even, S.cutoff), 1000) == 4
    assert support_gcd(S, 1000) == 1
    assert len(COMBINED) == 10
