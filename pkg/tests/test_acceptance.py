"""Acceptance criteria, one pass/fail line each.

Run under pytest (lines are echoed in the terminal summary) or directly:

    python3 tests/test_acceptance.py
"""

import sys
import time
from collections import Counter
from pathlib import Path

import numpy as np

from cubiczeta import analytic, finite
from cubiczeta.orbits import brute_force_orbits, enumerate_orbits
from cubiczeta.relations import ZetaData, combined_series, verify

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE_LINES, FULL_X  # noqa: E402

# tolerances
SYM_TOL = 1e-9
SYM_POINTS = 100
GZ_TOL = 1e-10
CONTROL_MIN = 1e-3
TAUBERIAN_TOL = 0.30
TAUBERIAN_X = 50000
DUAL_RAW_X = 43200


def _record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _run(data, rels):
    t0 = time.perf_counter()
    reps = [verify(rel, Q, data) for rel, Q in rels]
    bad = [r.as_dict() for r in reps if not r.passed]
    return not bad, bad, time.perf_counter() - t0


def criterion_1(data):
    ok, bad, secs = _run(data, [("ON", 300)])
    ok = ok and secs < 60
    return _record(1, ok, f"dual xi1 = A xi1 exactly for n <= 300 (orbits |P| <= 8100), {secs:.1f}s {bad or ''}")


def criterion_2(data):
    ok, bad, secs = _run(data, [("STY2", 300), ("STY3", 300)])
    return _record(2, ok, f"i = 2, 3 dual relations exactly for n <= 300, {secs:.1f}s {bad or ''}")


def criterion_3(data):
    ok, bad, secs = _run(data, [("MAIN_THETA", 100), ("MAIN_ETA", 100), ("SUPPORT_INTEGRALITY", 100)])
    ok = ok and data.X >= DUAL_RAW_X and secs < 300
    return _record(3, ok, f"theta/eta dual = A theta/eta for n <= 100, integral support, orbits |P| <= {data.X}, "
                          f"{secs:.1f}s {bad or ''}")


def criterion_4(data):
    rels = [(r, 100) for r in ("KSR1", "KSR2", "KSR3", "KSR4", "MOD2_SET", "MOD2_SOLVED", "MOD2_CLASSES",
                               "REMARK38", "INDUCTION", "BOX_SCALING", "PROP33_4")]
    ok, bad, secs = _run(data, rels)
    return _record(4, ok, f"{len(rels)} congruence/mod-2/subgroup relation groups for n <= 100, {secs:.1f}s {bad or ''}")


def criterion_5():
    t0 = time.perf_counter()
    X = 500
    fast = Counter((r.disc, r.stab, r.membership) for r in enumerate_orbits(X))
    slow = Counter((r.disc, r.stab, r.membership) for r in brute_force_orbits(X, B=20, check=True))
    ok = fast == slow
    return _record(5, ok, f"enumeration = brute-force oracle on (disc, stab, membership) for |P| <= {X}, "
                          f"{sum(fast.values())} orbits, box stabilized, {time.perf_counter() - t0:.1f}s")


def criterion_6():
    t0 = time.perf_counter()
    reps = finite.run_all(seed=0)
    secs = time.perf_counter() - t0
    ok = all(r.passed for r in reps) and len(reps) == 6 and secs < 60
    names = ", ".join(f"{r.name}={'ok' if r.passed else 'FAIL'}" for r in reps)
    return _record(6, ok, f"exhaustive finite scans ({names}), {secs:.1f}s")


def criterion_7():
    pts = analytic.sample_strip(SYM_POINTS, seed=0)
    sym = analytic.check_symmetrization(pts)
    sym_ctrl = analytic.check_symmetrization(pts, A=np.eye(2, dtype=complex))
    gz = analytic.check_gamma_zeta_identity(3)
    gz_ctrl = analytic.check_gamma_zeta_identity(2)
    ok = sym <= SYM_TOL and gz <= GZ_TOL and sym_ctrl >= CONTROL_MIN and gz_ctrl >= CONTROL_MIN
    return _record(7, ok, f"symmetrization residual {sym:.2e} <= {SYM_TOL:g} over {SYM_POINTS} points, "
                          f"Gamma/zeta residual {gz:.2e} <= {GZ_TOL:g}, controls {sym_ctrl:.2f} and {gz_ctrl:.2f} "
                          f">= {CONTROL_MIN:g}")


def criterion_8(data):
    ok, bad, secs = _run(data, [("GCD_SUPPORT", 1000)])
    return _record(8, ok, f"support gcd is 1 for all ten combined series at cutoff 1000, {secs:.1f}s {bad or ''}")


def criterion_9(data):
    devs = {}
    for name in ("xi1plus", "xi1minus"):
        res = analytic.RESIDUES[name]
        devs[name] = analytic.tauberian_diagnostic(combined_series(data, name), res.residue_at_one(),
                                                   res.residue_at_five_sixths(), TAUBERIAN_X)
    ok = all(v <= TAUBERIAN_TOL for v in devs.values())
    shown = ", ".join(f"{k} {v:.4f}" for k, v in devs.items())
    return _record(9, ok, f"partial sums at X = {TAUBERIAN_X}: relative deviation {shown} <= {TAUBERIAN_TOL} "
                          "(heuristic, not a proof)")


# ------------------------------------------------------------------ pytest

def test_criterion_1_dual_lattice_one(data_full):
    assert criterion_1(data_full)


def test_criterion_2_dual_relations_i2_i3(data_full):
    assert criterion_2(data_full)


def test_criterion_3_theta_eta(data_full):
    assert criterion_3(data_full)


def test_criterion_4_congruence_relations(data_full):
    assert criterion_4(data_full)


def test_criterion_5_oracle_equivalence():
    assert criterion_5()


def test_criterion_6_finite_scans():
    assert criterion_6()


def test_criterion_7_analytic_identities():
    assert criterion_7()


def test_criterion_8_support_gcd(data_full):
    assert criterion_8(data_full)


def test_criterion_9_tauberian(data_full):
    assert criterion_9(data_full)


if __name__ == "__main__":
    data = ZetaData(enumerate_orbits(FULL_X), FULL_X)
    results = [criterion_1(data), criterion_2(data), criterion_3(data), criterion_4(data), criterion_5(),
               criterion_6(), criterion_7(), criterion_8(data), criterion_9(data)]
    sys.exit(0 if all(results) else 1)
