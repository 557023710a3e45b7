"""
Vacuum-state Gaussian coefficients, the reduced density kernel and entropies.

The two-mode vacuum is psi ~ exp(-A1 x1^2/2 - A2 x2^2/2 + A12 x1 x2). Tracing out
mode 2 leaves a single-mode Gaussian kernel whose spectrum is geometric,
p_n = (1 - gamma) gamma^n, so every entropy is a function of gamma.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ermakov import ModeScale
from exceptions import InvalidArgumentError

HERMITE_MAX_ORDER = 20


@dataclass(frozen=True)
class VacuumCoefficients:
    """Complex Gaussian exponents of the two-mode vacuum."""
    A1: complex
    A2: complex
    A12: complex
    phi: float
    scale1: ModeScale
    scale2: ModeScale

    @property
    def sigma_product(self) -> float:
        return self.scale1.sigma_tilde * self.scale2.sigma_tilde

    def identity_residual(self) -> float:
        """Relative error of Re A1 Re A2 - Re^2 A12 = sigma_tilde1 sigma_tilde2."""
        lhs = self.A1.real * self.A2.real - self.A12.real ** 2
        return abs(lhs - self.sigma_product) / self.sigma_product

    def amplitude_matrix(self) -> np.ndarray:
        """Symmetric matrix A with psi ~ exp(-x^T A x / 2)."""
        return np.array([[self.A1, -self.A12], [-self.A12, self.A2]], dtype=complex)


@dataclass(frozen=True)
class ReducedKernel:
    """Exponents of rho_A(x, x') = exp(-D1 x^2/2 - D1* x'^2/2 + D12 x x' / 2)."""
    D1: complex
    D12: float
    alpha1: float
    alpha2: float
    alpha3: float
    kappa: float
    gamma: float

    def d_sum_residual(self, vc: VacuumCoefficients) -> float:
        """Relative error of D1 + D1* - D12 = 2 sigma_tilde1 sigma_tilde2 / Re A2."""
        expected = 2.0 * vc.sigma_product / vc.A2.real
        return abs(2.0 * self.D1.real - self.D12 - expected) / expected


@dataclass(frozen=True)
class EntropyReport:
    """Mixedness and entanglement of the reduced state at one instant."""
    purity: float
    S_L: float
    gamma: float
    S_von: float
    negativity: float


def vacuum_coefficients(phi: float, scale1: ModeScale, scale2: ModeScale) -> VacuumCoefficients:
    """Rotate the mode exponents rho1, rho2 back to the oscillator coordinates."""
    if scale1.sigma_tilde <= 0.0 or scale2.sigma_tilde <= 0.0:
        raise InvalidArgumentError("Mode widths must be positive")
    c, s = math.cos(phi), math.sin(phi)
    rho1, rho2 = scale1.rho, scale2.rho
    return VacuumCoefficients(
        A1=rho1 * c * c + rho2 * s * s,
        A2=rho2 * c * c + rho1 * s * s,
        A12=s * c * (rho1 - rho2),
        phi=phi,
        scale1=scale1,
        scale2=scale2,
    )


def reduced_kernel(vc: VacuumCoefficients) -> ReducedKernel:
    """
    Integrate mode 2 out of |psi><psi|.

    Writing rho_A = exp(-(alpha1 + alpha3)(x^2 + x'^2) + i alpha2 (x^2 - x'^2) + 2 alpha3 x x'),
    the half-exponent D1/2 equals alpha1 + alpha3 - i alpha2 and D12 = 4 alpha3.
    """
    re_a2 = vc.A2.real
    D1 = vc.A1 - vc.A12 * vc.A12 / (2.0 * re_a2)
    D12 = abs(vc.A12) ** 2 / re_a2
    alpha1 = vc.sigma_product / (2.0 * re_a2)
    alpha3 = 0.25 * D12
    alpha2 = -0.5 * D1.imag
    kappa = 2.0 * math.sqrt(alpha1 * (alpha1 + 2.0 * alpha3))
    gamma = alpha3 / (alpha1 + alpha3 + 0.5 * kappa)
    return ReducedKernel(
        D1=D1, D12=D12,
        alpha1=alpha1, alpha2=alpha2, alpha3=alpha3,
        kappa=kappa, gamma=gamma,
    )


def marginal_purity(vc: VacuumCoefficients) -> float:
    """Tr(rho_A^2) = sqrt(s1 s2 / (s1 s2 + |A12|^2))."""
    sp = vc.sigma_product
    return math.sqrt(sp / (sp + abs(vc.A12) ** 2))


def _check_gamma(gamma: float) -> None:
    if not 0.0 <= gamma < 1.0:
        raise InvalidArgumentError(f"Schmidt parameter must lie in [0, 1), got {gamma}")


def schmidt_spectrum(gamma: float, n_max: int) -> np.ndarray:
    """p_n = (1 - gamma) gamma^n for n = 0..n_max."""
    _check_gamma(gamma)
    if n_max < 0:
        raise InvalidArgumentError(f"n_max must be non-negative, got {n_max}")
    return (1.0 - gamma) * np.power(gamma, np.arange(n_max + 1, dtype=float))


def purity_from_gamma(gamma: float) -> float:
    return (1.0 - gamma) / (1.0 + gamma)


def von_neumann(gamma: float) -> float:
    """-ln(1 - gamma) - gamma/(1 - gamma) ln(gamma), in nats."""
    _check_gamma(gamma)
    if gamma == 0.0:
        return 0.0
    return -math.log1p(-gamma) - gamma / (1.0 - gamma) * math.log(gamma)


def von_neumann_from_linear(S_L: float) -> float:
    """
    Closed form of S_von written directly in terms of S_L.

    It corresponds to gamma = 2 S_L / (1 + S_L), which disagrees with the
    geometric-spectrum relation S_L = 2 gamma / (1 + gamma). Kept for comparison
    only; records use von_neumann(gamma).
    """
    if not 0.0 <= S_L < 1.0:
        raise InvalidArgumentError(f"Linear entropy must lie in [0, 1), got {S_L}")
    if S_L == 0.0:
        return 0.0
    g = 2.0 * S_L / (1.0 + S_L)
    return -math.log((1.0 - S_L) / (1.0 + S_L)) - (2.0 * S_L / (1.0 - S_L)) * math.log(g)


def gamma_from_linear(S_L: float) -> float:
    """Invert S_L = 2 gamma / (1 + gamma)."""
    return S_L / (2.0 - S_L)


def generalized_entropies(gamma: float, nu: float) -> Tuple[float, float]:
    """
    Tsallis-type and Renyi entropies of order nu.

    Returns:
        (S_BT, S_R) with Tr rho^nu = (1 - gamma)^nu / (1 - gamma^nu)
    """
    _check_gamma(gamma)
    if nu <= 0.0:
        raise InvalidArgumentError(f"Entropy order must be positive, got {nu}")
    if nu == 1.0:
        raise InvalidArgumentError("Order 1 is the von Neumann entropy; use von_neumann")
    trace = (1.0 - gamma) ** nu / (1.0 - gamma ** nu)
    return (1.0 - trace) / (nu - 1.0), math.log(trace) / (1.0 - nu)


def static_gamma(sigma1: float, sigma2: float) -> float:
    """Schmidt parameter for time-independent frequencies at phi = pi/4."""
    root = math.sqrt(sigma1 * sigma2)
    total = sigma1 + sigma2
    return (sigma1 - sigma2) ** 2 / (total * total + 4.0 * root * (total + root))


def hermite(n: int, xi: np.ndarray) -> np.ndarray:
    """Physicists' Hermite polynomial H_n by forward recurrence."""
    xi = np.asarray(xi, dtype=float)
    h_prev = np.ones_like(xi)
    if n == 0:
        return h_prev
    h_curr = 2.0 * xi
    for k in range(1, n):
        h_prev, h_curr = h_curr, 2.0 * xi * h_curr - 2.0 * k * h_prev
    return h_curr


def chi_eigenfunction(n: int, kappa: float, alpha2: float, x):
    """
    Normalized eigenfunction of the reduced kernel.

    chi_n(x) = (kappa/pi)^(1/4) / sqrt(2^n n!) H_n(sqrt(kappa) x) exp(-kappa x^2/2 + i alpha2 x^2)
    """
    if kappa <= 0.0:
        raise InvalidArgumentError(f"kappa must be positive, got {kappa}")
    if not 0 <= n <= HERMITE_MAX_ORDER:
        raise InvalidArgumentError(f"Eigenfunction order must be in [0, {HERMITE_MAX_ORDER}], got {n}")
    x_arr = np.asarray(x, dtype=float)
    norm = (kappa / math.pi) ** 0.25 / math.sqrt(2.0 ** n * math.factorial(n))
    values = norm * hermite(n, math.sqrt(kappa) * x_arr) * np.exp(
        (-0.5 * kappa + 1j * alpha2) * x_arr * x_arr
    )
    if x_arr.ndim == 0:
        return complex(values)
    return values
