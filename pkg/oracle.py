"""
Brute-force quadrature checks for the closed forms.

Everything here starts from the two-mode wavefunction itself and never uses
the reduced-kernel or Wigner formulas it is meant to check.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import eigh

from exceptions import InsufficientGridError, InvalidArgumentError
from gaussian_vacuum import VacuumCoefficients
from wigner import WignerCoefficients, wigner_quadratic_form

logger = logging.getLogger(__name__)

MIN_POINTS = 64


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid with trapezoid weights."""
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < MIN_POINTS:
            raise InvalidArgumentError(f"Oracle grids need at least {MIN_POINTS} points, got {self.n_points}")
        if self.x_max <= self.x_min:
            raise InvalidArgumentError("Grid range is empty")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.n_points, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    def refined(self, n_points: int) -> "Grid1D":
        return Grid1D(self.x_min, self.x_max, n_points)


@dataclass(frozen=True)
class KernelMatrix:
    """Symmetrized Nystrom discretization sqrt(w_i) rho_A(x_i, x_j) sqrt(w_j)."""
    K: np.ndarray
    grid: Grid1D

    @property
    def trace(self) -> float:
        return float(np.trace(self.K).real)

    @property
    def hermitian_error(self) -> float:
        return float(np.abs(self.K - self.K.conj().T).max())


def auto_grid(vc: VacuumCoefficients, n_points: int = 256, window: float = 8.0) -> Grid1D:
    """Symmetric window of window / sqrt(smallest mode width)."""
    half = window / math.sqrt(min(vc.scale1.sigma_tilde, vc.scale2.sigma_tilde))
    return Grid1D(-half, half, n_points)


def _normalization(vc: VacuumCoefficients) -> float:
    """N with |N|^2 \\int exp(-x^T Re(A) x) = 1."""
    R = vc.amplitude_matrix().real
    return math.sqrt(math.sqrt(np.linalg.det(R)) / math.pi)


def wavefunction(vc: VacuumCoefficients, x1, x2) -> np.ndarray:
    """Normalized psi(x1, x2) = N exp(-A1 x1^2/2 - A2 x2^2/2 + A12 x1 x2)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    exponent = -0.5 * vc.A1 * x1 * x1 - 0.5 * vc.A2 * x2 * x2 + vc.A12 * x1 * x2
    return _normalization(vc) * np.exp(exponent)


def build_kernel(vc: VacuumCoefficients, grid: Optional[Grid1D] = None, n_points: int = 256) -> KernelMatrix:
    """rho_A(x, x') = \\int psi(x, y) psi*(x', y) dy by quadrature over y."""
    grid = grid or auto_grid(vc, n_points)
    x = grid.points
    w = grid.weights
    psi = wavefunction(vc, x[:, None], x[None, :])
    sqrt_w = np.sqrt(w)
    K = (sqrt_w[:, None] * psi) @ (w[:, None] * psi.conj().T) * sqrt_w[None, :]
    return KernelMatrix(K=0.5 * (K + K.conj().T), grid=grid)


def grid_purity(kernel: KernelMatrix) -> float:
    """Tr(K^2), the discrete double integral of |rho_A(x, x')|^2."""
    return float(np.sum(np.abs(kernel.K) ** 2))


def kernel_spectrum(kernel: KernelMatrix, k: int = 6) -> np.ndarray:
    """k largest eigenvalues, descending."""
    eigs = eigh(kernel.K, eigvals_only=True)
    return eigs[::-1][:k]


def leading_eigenvector(kernel: KernelMatrix) -> np.ndarray:
    """Eigenvector of the largest eigenvalue, in sqrt(w)-weighted coordinates."""
    _, vecs = eigh(kernel.K)
    return vecs[:, -1]


def eigenvector_overlap(kernel: KernelMatrix, chi_values: np.ndarray) -> float:
    """|<v0|chi>| with chi sampled on the kernel grid."""
    v0 = leading_eigenvector(kernel)
    chi = np.sqrt(kernel.grid.weights) * np.asarray(chi_values)
    chi = chi / np.linalg.norm(chi)
    return float(abs(np.vdot(v0, chi)))


def spectral_entropy(eigenvalues: Sequence[float], floor: float = 1e-300) -> float:
    """-sum(lambda ln lambda) over positive eigenvalues."""
    lam = np.asarray(eigenvalues, dtype=float)
    lam = lam[lam > floor]
    return float(-np.sum(lam * np.log(lam)))


def check_refinement(
    vc: VacuumCoefficients,
    n_points: int = 256,
    n_refined: int = 512,
    tol: float = 1e-6,
    window: float = 8.0,
) -> Tuple[float, float]:
    """
    Purity on the base grid and on the refined grid.

    Raises:
        InsufficientGridError: if the two differ by more than tol
    """
    base = auto_grid(vc, n_points, window)
    coarse = grid_purity(build_kernel(vc, base))
    fine = grid_purity(build_kernel(vc, base.refined(n_refined)))
    if abs(coarse - fine) > tol:
        raise InsufficientGridError(
            f"Grid purity moved by {abs(coarse - fine):.3g} under refinement",
            details={"coarse": coarse, "fine": fine, "n_points": n_points},
        )
    logger.debug(f"Grid purity {coarse:.12f} stable under refinement ({n_points}->{n_refined})")
    return coarse, fine


def numeric_wigner(
    vc: VacuumCoefficients,
    grid: Grid1D,
    point: Tuple[float, float, float, float],
) -> float:
    """
    W(x1, x2, p1, p2) = pi^-2 \\int\\int psi*(x + q) psi(x - q) exp(-2i p.q) d^2q

    grid is the q-axis used for both modes.
    """
    x1, x2, p1, p2 = point
    q = grid.points
    q1 = q[:, None]
    q2 = q[None, :]
    integrand = (
        np.conj(wavefunction(vc, x1 + q1, x2 + q2))
        * wavefunction(vc, x1 - q1, x2 - q2)
        * np.exp(-2j * (p1 * q1 + p2 * q2))
    )
    value = trapezoid(trapezoid(integrand, q, axis=1), q)
    return float(value.real / math.pi ** 2)


def wigner_normalization(wc: WignerCoefficients, n_points: int = 32, n_std: float = 7.0) -> float:
    """4D trapezoid integral of the closed-form Wigner function."""
    G = wigner_quadratic_form(wc)
    cov = 0.5 * np.linalg.inv(G)
    axes = [np.linspace(-n_std * math.sqrt(cov[i, i]), n_std * math.sqrt(cov[i, i]), n_points) for i in range(4)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    values = np.exp(-np.einsum("...i,ij,...j->...", mesh, G, mesh)) / math.pi ** 2
    for axis in reversed(range(4)):
        values = trapezoid(values, axes[axis], axis=axis)
    return float(values)


def marginal_moments(vc: VacuumCoefficients, n_points: int = 256, window: float = 8.0) -> Tuple[float, float, float]:
    """
    (<x1^2>, <p1^2>, <x1 p1>_sym) by 2D quadrature of |psi|^2.

    p1 psi = i (A1 x1 - A12 x2) psi is applied analytically. The cross moment
    is reported with the Wigner-convention sign (p -> -p).
    """
    grid = auto_grid(vc, n_points, window)
    x = grid.points
    x1 = x[:, None]
    x2 = x[None, :]
    density = np.abs(wavefunction(vc, x1, x2)) ** 2
    dpsi = -vc.A1 * x1 + vc.A12 * x2

    def integrate(f: np.ndarray) -> float:
        return float(trapezoid(trapezoid(f, x, axis=1), x))

    x_sq = integrate(x1 * x1 * density)
    p_sq = integrate(np.abs(dpsi) ** 2 * density)
    xp_qm = integrate(x1 * dpsi.imag * density)
    return x_sq, p_sq, -xp_qm
