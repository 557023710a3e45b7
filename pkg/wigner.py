"""
Two-mode Wigner function of the vacuum, its single-mode marginal and moments.

Convention: W(x, p) = pi^-2 \\int psi*(x+q) psi(x-q) exp(-2i p.q) d^2q, so the
vacuum of a unit oscillator is exp(-x^2 - p^2) / pi^2 per mode.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ermakov import ModeScale
from exceptions import InvalidArgumentError, NonPositiveDefiniteError
from gaussian_vacuum import VacuumCoefficients


@dataclass(frozen=True)
class WignerCoefficients:
    """
    Exponent coefficients of
    W = pi^-2 exp(-eta1 x1^2 - eta2 x2^2 - beta1 p1^2 - beta2 p2^2
                  + 2 eta12 x1 x2 + 2 beta12 p1 p2
                  + 2 delta1 x1 p2 + 2 delta2 x2 p1 + 2 gamma1 x1 p1 + 2 gamma2 x2 p2).
    """
    eta1: float
    eta2: float
    eta12: float
    beta1: float
    beta2: float
    beta12: float
    delta1: float
    delta2: float
    gamma1: float
    gamma2: float


@dataclass(frozen=True)
class MarginalWigner:
    """W_A(x, p) ~ exp(-Delta1 x^2 - Delta2 p^2 + 2 Delta12 x p) after tracing out mode 2."""
    Delta1: float
    Delta2: float
    Delta12: float
    norm_det: float

    @property
    def determinant(self) -> float:
        return self.Delta1 * self.Delta2 - self.Delta12 * self.Delta12


@dataclass(frozen=True)
class UncertaintyReport:
    """Uncertainty of one oscillator; dx and dp need the marginal moments."""
    product: float
    U: float
    lower_bound: float
    dx: Optional[float] = None
    dp: Optional[float] = None


def _rotate(phi_c: float, phi_s: float, d1: float, d2: float) -> Tuple[float, float, float]:
    """Entries (11, 22, 12) of O diag(d1, d2) O^T in the oscillator frame."""
    cc, ss, cs = phi_c * phi_c, phi_s * phi_s, phi_c * phi_s
    return cc * d1 + ss * d2, ss * d1 + cc * d2, -cs * (d1 - d2)


def wigner_coefficients(
    phi: float,
    scale1: ModeScale,
    scale2: ModeScale,
    vc: VacuumCoefficients,
) -> WignerCoefficients:
    """
    Coefficients of the two-mode Wigner function.

    With A = R + iI the amplitude matrix, W = pi^-2 exp(-x^T (R + I R^-1 I) x
    - p^T R^-1 p + 2 p^T R^-1 I x). R and I share the normal-mode frame, so
    every block is a rotated diagonal.
    """
    s1, s2 = scale1.sigma_tilde, scale2.sigma_tilde
    u1, u2 = scale1.hdot_over_h, scale2.hdot_over_h
    if s1 <= 0.0 or s2 <= 0.0:
        raise InvalidArgumentError("Mode widths must be positive")
    c, s = math.cos(phi), math.sin(phi)

    eta1, eta2, m12 = _rotate(c, s, s1 + u1 * u1 / s1, s2 + u2 * u2 / s2)
    beta1, beta2, b12 = _rotate(c, s, 1.0 / s1, 1.0 / s2)
    gamma1, gamma2, g12 = _rotate(c, s, -u1 / s1, -u2 / s2)
    return WignerCoefficients(
        eta1=eta1, eta2=eta2, eta12=-m12,
        beta1=beta1, beta2=beta2, beta12=-b12,
        delta1=g12, delta2=g12,
        gamma1=gamma1, gamma2=gamma2,
    )


def wigner_quadratic_form(wc: WignerCoefficients) -> np.ndarray:
    """Symmetric G with W = pi^-2 exp(-Q^T G Q), Q = (x1, p1, x2, p2)."""
    return np.array([
        [wc.eta1, -wc.gamma1, -wc.eta12, -wc.delta1],
        [-wc.gamma1, wc.beta1, -wc.delta2, -wc.beta12],
        [-wc.eta12, -wc.delta2, wc.eta2, -wc.gamma2],
        [-wc.delta1, -wc.beta12, -wc.gamma2, wc.beta2],
    ])


def wigner_value(wc: WignerCoefficients, point) -> float:
    """Closed-form W at Q = (x1, x2, p1, p2)."""
    x1, x2, p1, p2 = point
    q = np.array([x1, p1, x2, p2], dtype=float)
    return float(np.exp(-q @ wigner_quadratic_form(wc) @ q) / math.pi ** 2)


def marginal_wigner(wc: WignerCoefficients) -> MarginalWigner:
    """Trace mode 2 out of the Wigner function."""
    norm_det = wc.beta2 * wc.eta2 - wc.gamma2 * wc.gamma2
    if norm_det <= 0.0:
        raise NonPositiveDefiniteError(f"Mode-2 block is not positive definite (det={norm_det:.3g})")
    return MarginalWigner(
        Delta1=wc.eta1 / norm_det,
        Delta2=wc.beta1 / norm_det,
        Delta12=wc.gamma1 / norm_det,
        norm_det=norm_det,
    )


def marginal_wigner_value(mw: MarginalWigner, x: float, p: float) -> float:
    """Normalized marginal W_A(x, p)."""
    return math.sqrt(mw.determinant) / math.pi * math.exp(
        -mw.Delta1 * x * x - mw.Delta2 * p * p + 2.0 * mw.Delta12 * x * p
    )


def moments(mw: MarginalWigner) -> Tuple[float, float, float]:
    """(<x1^2>, <p1^2>, <x1 p1>_sym) of the marginal; first moments vanish."""
    det = mw.determinant
    if det <= 0.0:
        raise NonPositiveDefiniteError(f"Marginal form is not positive definite (det={det:.3g})")
    return mw.Delta2 / (2.0 * det), mw.Delta1 / (2.0 * det), mw.Delta12 / (2.0 * det)


def uncertainty_product(
    S_L: float,
    gamma_i: float,
    purity: Optional[float] = None,
    marginal: Optional[MarginalWigner] = None,
) -> UncertaintyReport:
    """
    Dx Dp = (1/2) sqrt(1/(1 - S_L)^2 + gamma_i^2) for one oscillator.

    The closed form fixes only the product. dx and dp are filled in from the
    marginal's second moments when one is given, and stay None otherwise.
    """
    if purity is None:
        purity = 1.0 - S_L
    if not 0.0 <= S_L <= 1.0 or not 0.0 < purity <= 1.0:
        raise InvalidArgumentError(f"Linear entropy must lie in [0, 1), got S_L={S_L}, purity={purity}")
    variance_product = 0.25 * (1.0 / (purity * purity) + gamma_i * gamma_i)
    dx = dp = None
    if marginal is not None:
        x2, p2, _ = moments(marginal)
        dx, dp = math.sqrt(x2), math.sqrt(p2)
    return UncertaintyReport(
        product=math.sqrt(variance_product),
        U=4.0 * variance_product,
        lower_bound=0.5 * math.sqrt(1.0 + gamma_i * gamma_i),
        dx=dx,
        dp=dp,
    )


def uncertainty_from_moments(mw: MarginalWigner) -> UncertaintyReport:
    """Same report with dx and dp taken from the marginal moments."""
    x2, p2, xp = moments(mw)
    dx, dp = math.sqrt(x2), math.sqrt(p2)
    product = dx * dp
    gamma_i = 2.0 * xp
    return UncertaintyReport(
        product=product,
        U=4.0 * product * product,
        lower_bound=0.5 * math.sqrt(1.0 + gamma_i * gamma_i),
        dx=dx,
        dp=dp,
    )
