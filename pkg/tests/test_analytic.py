import cmath
import math
import random

import mpmath
import numpy as np
import pytest

from cubiczeta.analytic import (RESIDUES, PoleError, ResidueTable, check_gamma_zeta_identity, check_symmetrization,
                                delta_factor, gamma_complex, m_matrix, sample_strip, symmetrization_residual,
                                tauberian_diagnostic, zeta_real)
from cubiczeta.relations import combined_series
from cubiczeta.series import DirichletSeries, QRoot3


def test_gamma_values():
    assert abs(gamma_complex(1) - 1) < 1e-13
    assert abs(gamma_complex(0.5) - math.sqrt(math.pi)) < 1e-13
    with pytest.raises(PoleError):
        gamma_complex(-2)


def test_gamma_recurrence():
    rng = random.Random(2)
    for _ in range(50):
        s = complex(rng.uniform(-3, 4), rng.uniform(-6, 6))
        lhs = gamma_complex(s + 1)
        rhs = s * gamma_complex(s)
        assert abs(lhs - rhs) <= 1e-11 * abs(rhs)


def test_gamma_against_mpmath():
    rng = random.Random(4)
    for _ in range(200):
        s = complex(rng.uniform(-4, 6), rng.uniform(-8, 8))
        ref = complex(mpmath.gamma(mpmath.mpc(s.real, s.imag)))
        assert abs(gamma_complex(s) - ref) <= 1e-12 * abs(ref)


def test_zeta_values():
    assert abs(zeta_real(2) - math.pi ** 2 / 6) < 1e-12
    assert abs(zeta_real(0) + 0.5) < 1e-12
    for s in (0.1, 1 / 3, 0.5, 2 / 3, 0.9, 1.5, 3.0, -1.5):
        assert abs(zeta_real(s) - float(mpmath.zeta(s))) < 1e-12 * max(1, abs(float(mpmath.zeta(s))))
    with pytest.raises(PoleError):
        zeta_real(1)


def test_m_matrix_shape():
    s = 0.3 + 0.7j
    M = m_matrix(s)
    assert np.all(np.isfinite(M))
    assert abs(M[1, 0] - 3 * M[0, 1]) < 1e-14 * abs(M[1, 0])
    assert abs(M[0, 0] / M[0, 1] - cmath.sin(2 * math.pi * s) / cmath.sin(math.pi * s)) < 1e-12


def test_delta_factor_finite():
    for sign in (1, -1):
        assert np.isfinite(delta_factor(sign, 0.5 + 1j))


def test_symmetrization():
    assert check_symmetrization(100, seed=0) <= 1e-9
    assert check_symmetrization(100, seed=0, A=np.eye(2, dtype=complex)) >= 1e-3


def test_symmetrization_tracks_gamma_precision():
    pts = sample_strip(30, seed=1)
    hi = check_symmetrization(pts)
    lo = check_symmetrization(pts, precision="low")
    gamma_err = max(abs(gamma_complex(s, "low") / gamma_complex(s) - 1) for s in pts)
    assert lo > 10 * hi
    # degradation is of the order of the gamma error itself
    assert lo < 100 * gamma_err + 1e-12


def test_residual_single_point():
    assert symmetrization_residual(0.25 + 2j) < 1e-10


def test_gamma_zeta_identity():
    assert check_gamma_zeta_identity() <= 1e-10
    assert check_gamma_zeta_identity(cube_power=2) >= 1e-3


def test_residue_signs_exact():
    assert QRoot3(-3, 2).sign() == 1
    assert QRoot3(-9, 7).sign() == 1
    assert QRoot3(-9, 5).sign() == -1
    for name, res in RESIDUES.items():
        want = -1 if name == "etaminus" else 1
        assert res.sign_at_one() == want
        assert (res.residue_at_one() > 0) == (want > 0)


def test_residue_table():
    t = ResidueTable()
    assert t["xi1plus"].conductor == 2 ** 4 * 27
    assert t["xi2minus"].conductor == 2 ** 8 * 27
    assert t["thetaplus"].conductor == 2 ** 6 * 27
    assert t["xi1minus"].residue_at_five_sixths() == 0
    g = float(mpmath.gamma(mpmath.mpf(1) / 3))
    z = float(mpmath.zeta(mpmath.mpf(1) / 3))
    assert abs(t["xi1plus"].residue_at_five_sixths() - g ** 3 * z / (3 * math.pi)) < 1e-12
    assert abs(t["etaplus"].residue_at_five_sixths() - g ** 3 * z / (3 * 2 ** (1 / 3) * math.pi)) < 1e-12
    assert abs(t["xi1plus"].residue_at_one() - (2 * math.sqrt(3) + 3) / 18 * math.pi ** 2) < 1e-13
    assert len(t.names()) == 10


def test_tauberian_degenerate():
    assert tauberian_diagnostic(DirichletSeries({}, 100), 0.0, 0.0, 100) == 0.0
    with pytest.raises(ValueError):
        tauberian_diagnostic(DirichletSeries({}, 10), 1.0, 0.0, 100)


def test_tauberian_small(data_small):
    res = RESIDUES["xi1plus"]
    dev = tauberian_diagnostic(combined_series(data_small, "xi1plus"), res.residue_at_one(),
                               res.residue_at_five_sixths(), 12000)
    assert dev < 0.30
