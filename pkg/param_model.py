"""
Physical parameters, the piecewise quench timeline and the normal modes.

The coupled potential (omega1^2 x1^2 + omega2^2 x2^2)/2 + J x1 x2 is diagonalized
by a rotation through the mixing angle phi. The cyclotron term shifts both
mode frequencies-squared by omega_c^2; callers add that shift themselves.
"""

import math
from dataclasses import dataclass

from exceptions import InvalidArgumentError
from models import QuenchSpec, SystemParams


@dataclass(frozen=True)
class NormalModes:
    """Mode frequencies-squared at B = 0 and the rotation that produces them."""
    sigma1_sq: float
    sigma2_sq: float
    kappa_tilde: int
    phi: float

    def shifted(self, omega_c: float) -> tuple:
        """Magnetically shifted frequencies-squared (sigma_i^2 + omega_c^2)."""
        w = omega_c * omega_c
        return self.sigma1_sq + w, self.sigma2_sq + w


def mixing_angle(omega1_sq: float, omega2_sq: float, J: float) -> float:
    """
    Angle that cancels the cross term: tan(2 phi) = 2J / (omega1^2 - omega2^2).

    Principal branch, so 2 phi lies in (-pi/2, pi/2].
    """
    if J == 0.0:
        return 0.0
    diff = omega1_sq - omega2_sq
    if diff == 0.0:
        return math.pi / 4.0
    return 0.5 * math.atan(2.0 * J / diff)


def normal_modes(params: SystemParams) -> NormalModes:
    """Normal-mode frequencies-squared at zero field, with the kappa sign and phi."""
    w1 = params.omega1 * params.omega1
    w2 = params.omega2 * params.omega2
    kappa = 1 if w1 >= w2 else -1
    half_sum = 0.5 * (w1 + w2)
    half_root = 0.5 * math.sqrt(4.0 * params.J * params.J + (w1 - w2) ** 2)
    return NormalModes(
        sigma1_sq=half_sum + kappa * half_root,
        sigma2_sq=half_sum - kappa * half_root,
        kappa_tilde=kappa,
        phi=mixing_angle(w1, w2, params.J),
    )


def params_at(spec: QuenchSpec, t: float) -> SystemParams:
    """Initial parameters at t == 0, final parameters for t > 0."""
    if t < 0.0:
        raise InvalidArgumentError(f"Quench timeline starts at t=0, got t={t}")
    return spec.initial if t == 0.0 else spec.final


def sigma3_residual(params: SystemParams, phi: float) -> float:
    """Off-diagonal term left after rotating by phi (zero at the mixing angle)."""
    w1 = params.omega1 * params.omega1
    w2 = params.omega2 * params.omega2
    return 0.5 * (w1 - w2) * math.sin(2.0 * phi) - params.J * math.cos(2.0 * phi)


def critical_coupling(omega1: float, omega2: float) -> float:
    """Coupling at which the lower normal mode turns hyperbolic (sigma^2 = 0)."""
    return omega1 * omega2


def restoring_omega_c(sigma_sq: float) -> float:
    """Smallest omega_c that keeps sigma^2 + omega_c^2 >= 0 for this mode."""
    return math.sqrt(-sigma_sq) if sigma_sq < 0.0 else 0.0


def is_hyperbolic(sigma_sq: float, omega_c: float) -> bool:
    return sigma_sq + omega_c * omega_c < 0.0
