"""
Covariance matrices, standard form and logarithmic negativity.

Quadratures are ordered Q = (x1, p1, x2, p2) and V is normalized so that
the vacuum of a unit oscillator has V = identity.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ermakov import ModeScale
from exceptions import InvalidArgumentError, NonPositiveDefiniteError
from wigner import WignerCoefficients, wigner_quadratic_form


@dataclass(frozen=True)
class CovarianceMatrix:
    """4x4 real symmetric covariance matrix."""
    V: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        if V.shape != (4, 4):
            raise InvalidArgumentError(f"Two-mode covariance must be 4x4, got {V.shape}")
        object.__setattr__(self, "V", 0.5 * (V + V.T))

    def reduced(self, mode: int = 0) -> np.ndarray:
        i = 2 * mode
        return self.V[i:i + 2, i:i + 2]

    def is_physical(self, tol: float = 1e-10) -> bool:
        """V + i Omega is positive semidefinite."""
        eigs = np.linalg.eigvalsh(self.V + 1j * symplectic_form(2))
        return bool(eigs.min() >= -tol)


@dataclass(frozen=True)
class StandardForm:
    """Local blocks alpha I, correlation block diag(c, -c)."""
    alpha: float
    c: float

    @classmethod
    def from_alpha(cls, alpha: float) -> "StandardForm":
        if alpha < 1.0:
            raise InvalidArgumentError(f"Standard-form alpha must be >= 1, got {alpha}")
        return cls(alpha=alpha, c=math.sqrt(alpha * alpha - 1.0))

    @property
    def alpha_squared(self) -> float:
        return self.alpha * self.alpha

    def matrix(self) -> np.ndarray:
        a, c = self.alpha, self.c
        return np.array([
            [a, 0.0, c, 0.0],
            [0.0, a, 0.0, -c],
            [c, 0.0, a, 0.0],
            [0.0, -c, 0.0, a],
        ])


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(V: np.ndarray) -> np.ndarray:
    """Williamson spectrum from |eig(i Omega V)|, each value listed once, ascending."""
    n = V.shape[0] // 2
    eigs = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ V)))
    return eigs[::2]


def partial_transpose(V: np.ndarray) -> np.ndarray:
    """Time reversal on mode 2 (p2 -> -p2)."""
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    return flip @ V @ flip


def standard_form_alpha(phi: float, scale1: ModeScale, scale2: ModeScale) -> StandardForm:
    """
    Diagonal element of the standard form.

    The squared element is 1 + sin^2(2 phi) [(u1 - u2)^2 + (s1 - s2)^2] / (4 s1 s2)
    with s the mode widths and u the chirps hdot/h.
    """
    s1, s2 = scale1.sigma_tilde, scale2.sigma_tilde
    if s1 <= 0.0 or s2 <= 0.0:
        raise InvalidArgumentError("Mode widths must be positive")
    du = scale1.hdot_over_h - scale2.hdot_over_h
    alpha_sq = 1.0 + math.sin(2.0 * phi) ** 2 * (du * du + (s1 - s2) ** 2) / (4.0 * s1 * s2)
    return StandardForm.from_alpha(math.sqrt(alpha_sq))


def standard_form_from_covariance(cm: CovarianceMatrix) -> StandardForm:
    """alpha = sqrt(det) of the local block, valid for pure two-mode states."""
    det = float(np.linalg.det(cm.reduced(0)))
    return StandardForm.from_alpha(max(1.0, math.sqrt(max(det, 0.0))))


def ptranspose_min_eig(sf: StandardForm) -> float:
    """Smallest symplectic eigenvalue of the partial transpose, alpha - sqrt(alpha^2 - 1)."""
    # 1/(alpha + c) avoids cancellation for large alpha
    return 1.0 / (sf.alpha + sf.c)


def ptranspose_min_eig_general(sf: StandardForm) -> float:
    """Same eigenvalue from the two-mode invariant recipe nu^2 = x - sqrt(x^2 - 1), x = 2 alpha^2 - 1."""
    x = 2.0 * sf.alpha_squared - 1.0
    return math.sqrt(1.0 / (x + math.sqrt(x * x - 1.0)))


def log_negativity_from_alpha(sf: StandardForm) -> float:
    return max(0.0, -math.log(ptranspose_min_eig(sf)))


def log_negativity_from_SL(S_L: float, purity: Optional[float] = None) -> float:
    """
    -(1/2) ln[(1 - s)/(1 + s)] with s = sqrt(S_L (2 - S_L)).

    Evaluated as ln[(1 + s)/P] with P = 1 - S_L the purity, since (1 - s)(1 + s) = P^2.
    Pass the purity when it is known directly: near S_L = 1 the difference
    1 - S_L has lost all its digits.
    """
    if purity is None:
        purity = 1.0 - S_L
    if not 0.0 <= S_L <= 1.0 or not 0.0 < purity <= 1.0:
        raise InvalidArgumentError(f"Linear entropy must lie in [0, 1), got S_L={S_L}, purity={purity}")
    s = math.sqrt((1.0 - purity) * (1.0 + purity))
    return max(0.0, math.log((1.0 + s) / purity))


def log_negativity_from_covariance(cm: CovarianceMatrix) -> float:
    nu_min = float(symplectic_eigenvalues(partial_transpose(cm.V)).min())
    return max(0.0, -math.log(nu_min))


def covariance_from_moments(wc: WignerCoefficients) -> CovarianceMatrix:
    """
    V from the Wigner quadratic form.

    W ~ exp(-Q^T G Q) has second moments G^-1 / 2, so V = G^-1.

    Raises:
        NonPositiveDefiniteError: if G is not positive definite
    """
    G = wigner_quadratic_form(wc)
    try:
        np.linalg.cholesky(G)
    except np.linalg.LinAlgError as e:
        raise NonPositiveDefiniteError("Wigner quadratic form is not positive definite") from e
    return CovarianceMatrix(V=np.linalg.inv(G))
