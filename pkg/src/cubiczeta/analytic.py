"""Numerical checks of the gamma-factor identities and the residue constants."""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .series import DirichletSeries, QRoot3

# Lanczos coefficients: g = 7, n = 9 (full double precision) and g = 5, n = 7 (about 1e-10)
_LANCZOS = {
    "high": (7.0, (
        0.99999999999980993, 676.5203681218851, -1259.1392167224028, 771.32342877765313,
        -176.61502916214059, 12.507343278686905, -0.13857109526572012, 9.9843695780195716e-6,
        1.5056327351493116e-7,
    )),
    "low": (5.0, (
        1.000000000190015, 76.18009172947146, -86.50532032941677, 24.01409824083091,
        -1.231739572450155, 0.1208650973866179e-2, -0.5395239384953e-5,
    )),
}


class PoleError(ValueError):
    pass


def gamma_complex(s, precision: str = "high") -> complex:
    """Gamma function on the complex plane (Lanczos series, reflection for Re s < 1/2)."""
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise ValueError("non-finite argument")
    k = round(s.real)
    if k <= 0 and abs(s - k) < 1e-12:
        raise PoleError(f"gamma has a pole at {k}")
    if s.real < 0.5:
        return math.pi / (cmath.sin(math.pi * s) * gamma_complex(1 - s, precision))
    g, coef = _LANCZOS[precision]
    if precision == "high":
        z = s - 1
        x = coef[0]
        for i in range(1, len(coef)):
            x += coef[i] / (z + i)
        t = z + g + 0.5
        return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x
    # Numerical Recipes form: Gamma(s) = (s+g-1/2)^(s-1/2) e^-(s+g-1/2) sqrt(2 pi) series / s
    x = coef[0]
    for i in range(1, len(coef)):
        x += coef[i] / (s + i)
    t = s + g + 0.5
    return math.sqrt(2 * math.pi) * t ** (s + 0.5) * cmath.exp(-t) * x / s


def _borwein_d(n: int) -> list:
    d = []
    acc = 0.0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4 ** i / (math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    return d


_D = _borwein_d(60)


def _eta(s: float) -> float:
    n = len(_D) - 1
    dn = _D[n]
    total = 0.0
    for k in range(n):
        total += (-1) ** k * (_D[k] - dn) / (k + 1) ** s
    return -total / dn


def zeta_real(s: float) -> float:
    """Riemann zeta on the real line via accelerated alternating series."""
    s = float(s)
    if s == 1.0:
        raise PoleError("zeta has a pole at s = 1")
    if s < 0:
        # functional equation
        return (2 ** s * math.pi ** (s - 1) * math.sin(math.pi * s / 2)
                * gamma_complex(1 - s).real * zeta_real(1 - s))
    return _eta(s) / (1 - 2 ** (1 - s))


_DELTA_SHIFTS = {1: (-1 / 12, 1 / 12), -1: (5 / 12, 7 / 12)}


def delta_factor(sign: int, s, precision: str = "high") -> complex:
    """Gamma factor for the sign-combined series (sign = +1 or -1)."""
    s = complex(s)
    gam = lambda z: gamma_complex(z, precision)  # noqa: E731
    e1, e2 = _DELTA_SHIFTS[1 if sign > 0 else -1]
    pre = cmath.exp(s / 2 * math.log(2 ** 4 * 3 ** 3 / math.pi ** 4))
    h = s / 2
    return pre * gam(h) * gam(h + 0.5) * gam(h + e1) * gam(h + e2)


def m_matrix(s, precision: str = "high") -> np.ndarray:
    s = complex(s)
    gam = lambda z: gamma_complex(z, precision)  # noqa: E731
    common = (cmath.exp((3 * s - 2) * math.log(3)) / (2 * cmath.exp(4 * s * math.log(math.pi)))
              * gam(s) ** 2 * gam(s - 1 / 6) * gam(s + 1 / 6))
    s1 = cmath.sin(math.pi * s)
    s2 = cmath.sin(2 * math.pi * s)
    return common * np.array([[s2, s1], [3 * s1, s2]], dtype=complex)


T_MATRIX = np.array([[math.sqrt(3), 1.0], [math.sqrt(3), -1.0]], dtype=complex)
A_MATRIX = np.array([[0.0, 1.0], [3.0, 0.0]], dtype=complex)


def delta_matrix(s, precision: str = "high") -> np.ndarray:
    return np.diag([delta_factor(1, s, precision), delta_factor(-1, s, precision)])


def symmetrization_residual(s, A=A_MATRIX, precision: str = "high") -> float:
    """Max entrywise relative gap between ``D(1-s) T M(s) A`` and ``D(s) T``."""
    lhs = delta_matrix(1 - s, precision) @ T_MATRIX @ m_matrix(s, precision) @ A
    rhs = delta_matrix(s, precision) @ T_MATRIX
    return float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))


def sample_strip(samples: int, seed: int = 0) -> list:
    rng = random.Random(seed)
    return [complex(rng.uniform(0.1, 0.9), rng.uniform(-5, 5)) for _ in range(samples)]


def check_symmetrization(samples=100, seed: int = 0, A=A_MATRIX, precision: str = "high") -> float:
    """Largest residual over ``samples`` (a count or an explicit list of points)."""
    points = sample_strip(samples, seed) if isinstance(samples, int) else list(samples)
    return max(symmetrization_residual(s, A, precision) for s in points)


def gamma_zeta_sides(cube_power: int = 3) -> tuple:
    g13 = gamma_complex(1 / 3).real
    g23 = gamma_complex(2 / 3).real
    lhs = g13 ** cube_power * zeta_real(1 / 3) / (2 * math.pi)
    rhs = (2 * math.pi) ** (1 / 3) * g13 * zeta_real(2 / 3) / (3 * g23)
    return lhs, rhs


def check_gamma_zeta_identity(cube_power: int = 3) -> float:
    """Relative gap of the Gamma(1/3)^3 zeta(1/3) identity (``cube_power`` != 3 is a negative control)."""
    lhs, rhs = gamma_zeta_sides(cube_power)
    return abs(lhs - rhs) / abs(rhs)


def tauberian_diagnostic(series, r1: float, r56: float, X: float) -> float:
    """``|sum_{n<=X} a_n - (r1 X + 6/5 r56 X^{5/6})| / (r1 X)``; heuristic only."""
    if isinstance(series, DirichletSeries):
        if X > series.cutoff:
            raise ValueError(f"series reliable only to {series.cutoff}")
        items = series.coeffs.items()
    else:
        items = dict(series).items()
    total = sum(float(c) for q, c in items if q <= X)
    main = r1 * X + 1.2 * r56 * X ** (5 / 6)
    if r1 == 0:
        return 0.0 if total == 0 and main == 0 else math.inf
    return abs(total - main) / abs(r1 * X)


@dataclass(frozen=True)
class Residue:
    """Residues of one sign-combined series.

    ``r1`` is the residue at 1 divided by pi^2; ``r56`` the residue at 5/6 as
    ``(rational, k)`` meaning ``rational * 2^{-k/3} * Gamma(1/3)^3 zeta(1/3) / pi``
    (None when it vanishes); the conductor is ``2^two_exp * 3^3``.
    """

    r1: QRoot3
    r56: tuple | None
    two_exp: int
    fe_exp: int

    @property
    def conductor(self) -> int:
        return 2 ** self.two_exp * 27

    def residue_at_one(self) -> float:
        return float(self.r1) * math.pi ** 2

    def residue_at_five_sixths(self) -> float:
        if self.r56 is None:
            return 0.0
        q, k = self.r56
        g13 = gamma_complex(1 / 3).real
        return float(q) * 2 ** (-k / 3) * g13 ** 3 * zeta_real(1 / 3) / math.pi

    def sign_at_one(self) -> int:
        return self.r1.sign()


def _pm(u, v, r56, two_exp, fe_exp):
    return {
        1: Residue(QRoot3(u, v), r56, two_exp, fe_exp),
        -1: Residue(QRoot3(-u, v), None, two_exp, fe_exp),
    }


_F = Fraction
RESIDUES = {}
for _name, _row in {
    "xi1": _pm(_F(3, 18), _F(2, 18), (_F(1, 3), 0), 4, 0),
    "xi2": _pm(_F(3, 72), _F(2, 72), (_F(1, 12), 0), 8, 2),
    "xi3": _pm(_F(3, 72), _F(2, 72), (_F(1, 12), 0), 8, 2),
    "theta": _pm(_F(9, 72), _F(7, 72), (_F(1, 3), 1), 6, 1),
    "eta": _pm(_F(9, 72), _F(5, 72), (_F(1, 3), 1), 6, 1),
}.items():
    RESIDUES[_name + "plus"] = _row[1]
    RESIDUES[_name + "minus"] = _row[-1]


class ResidueTable:
    """Residue and conductor metadata for the ten sign-combined series."""

    entries = RESIDUES
    # a_i exponents of the self-dual functional equations
    a_exponents = {1: 0, 2: 2, 3: 2}

    def __getitem__(self, name: str) -> Residue:
        return self.entries[name]

    def names(self):
        return list(self.entries)
