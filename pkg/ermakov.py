"""
Ermakov scale functions for the quenched normal modes.

Each mode obeys  h'' + sigma^2(t,B) h = sigma^2(0,B) / h^3  with h(0)=1, h'(0)=0.
For the sudden quench the solution is closed form; arbitrary profiles go
through a fixed-step RK4 integrator.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np

from exceptions import (
    DegenerateContinuationError,
    ErmakovSingularityError,
    InvalidArgumentError,
    InvalidQuenchError
)

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-3
DEFAULT_H_FLOOR = 1e-9
DEFAULT_DEGENERATE_TOL = 1e-12
# Largest argument math.exp accepts without overflow; a cosh(x) switches to
# log space once x + ln(a) passes it
MAX_EXP_ARG = 709.0


@dataclass(frozen=True)
class ErmakovState:
    """Scale h, its derivative and the initial frequency-squared of one mode."""
    h: float
    hdot: float
    sigma0_sq: float


@dataclass(frozen=True)
class ModeScale:
    """Instantaneous Gaussian width and chirp of one mode."""
    sigma_tilde: float
    hdot_over_h: float

    @property
    def rho(self) -> complex:
        return complex(self.sigma_tilde, -self.hdot_over_h)


def mode_scale(state: ErmakovState) -> ModeScale:
    """sigma_tilde = sigma(0,B) / h^2 and the chirp hdot/h."""
    h_sq = state.h * state.h
    return ModeScale(
        sigma_tilde=math.sqrt(state.sigma0_sq) / h_sq,
        hdot_over_h=state.hdot / state.h,
    )


def quench_h(
    mode_sigma_i_sq: float,
    mode_sigma_f_sq: float,
    omega_c: float,
    t: float,
    degenerate_tol: float = DEFAULT_DEGENERATE_TOL,
) -> ErmakovState:
    """
    Closed-form Ermakov solution for a sudden quench of one mode.

    h^2 = a cos(2 Omega t) + b with Omega^2 = sigma_f^2 + omega_c^2. A negative
    Omega^2 continues to the cosh/sinh branch.

    Raises:
        InvalidQuenchError: if the initial mode has no ground state
        DegenerateContinuationError: if Omega^2 is zero within tolerance
    """
    wc_sq = omega_c * omega_c
    sigma0_sq = mode_sigma_i_sq + wc_sq
    if sigma0_sq <= 0.0:
        raise InvalidQuenchError(
            f"Initial mode frequency-squared {sigma0_sq:.6g} is not positive; no ground state"
        )
    omega_sq = mode_sigma_f_sq + wc_sq
    if abs(omega_sq) <= degenerate_tol:
        raise DegenerateContinuationError(
            f"Post-quench frequency-squared {omega_sq:.3g} sits on the hyperbolic threshold"
        )
    if t == 0.0:
        return ErmakovState(h=1.0, hdot=0.0, sigma0_sq=sigma0_sq)

    a = (mode_sigma_f_sq - mode_sigma_i_sq) / (2.0 * omega_sq)
    b = (mode_sigma_f_sq + mode_sigma_i_sq + 2.0 * wc_sq) / (2.0 * omega_sq)
    if omega_sq > 0.0:
        w = math.sqrt(omega_sq)
        h_sq = a * math.cos(2.0 * w * t) + b
        dh_sq = -2.0 * a * w * math.sin(2.0 * w * t)
    else:
        s = math.sqrt(-omega_sq)
        growth = 2.0 * s * t
        if growth + math.log(a) > MAX_EXP_ARG:
            return _runaway_state(a, s, growth, sigma0_sq)
        h_sq = a * math.cosh(growth) + b
        dh_sq = 2.0 * a * s * math.sinh(growth)
    h = math.sqrt(h_sq)
    return ErmakovState(h=h, hdot=dh_sq / (2.0 * h), sigma0_sq=sigma0_sq)


def _runaway_state(a: float, s: float, growth: float, sigma0_sq: float) -> ErmakovState:
    """Hyperbolic branch past cosh overflow: h^2 = (a/2) e^growth, taken in log space."""
    log_h = 0.5 * (growth + math.log(0.5 * a))
    h = math.exp(log_h) if log_h <= MAX_EXP_ARG else math.inf
    return ErmakovState(h=h, hdot=s * h, sigma0_sq=sigma0_sq)


def oscillation_floor(mode_sigma_i_sq: float, mode_sigma_f_sq: float, omega_c: float) -> float:
    """Lower bound b - |a| of h^2 for an oscillatory mode."""
    wc_sq = omega_c * omega_c
    return (min(mode_sigma_i_sq, mode_sigma_f_sq) + wc_sq) / (mode_sigma_f_sq + wc_sq)


def quench_profile(
    mode_sigma_i_sq: float,
    mode_sigma_f_sq: float,
    omega_c: float,
) -> Callable[[float], float]:
    """
    sigma^2(t,B) seen by the integrator for a sudden quench.

    The ODE runs for t > 0, so the post-quench value applies on the whole
    integration domain; the pre-quench value enters only as sigma0_sq.
    """
    omega_sq = mode_sigma_f_sq + omega_c * omega_c
    return lambda t: omega_sq


def integrate_ermakov(
    sigma_sq_profile: Callable[[float], float],
    sigma0_sq: float,
    t_grid: Sequence[float],
    max_step: float = DEFAULT_STEP,
    h_floor: float = DEFAULT_H_FLOOR,
) -> List[ErmakovState]:
    """
    Classical RK4 on (h, hdot) with h(0)=1, hdot(0)=0.

    Each interval of t_grid is split into equal substeps no longer than max_step.

    Raises:
        InvalidArgumentError: if the grid does not start at 0 or is not increasing
        ErmakovSingularityError: if h drops below h_floor
    """
    times = np.asarray(t_grid, dtype=float)
    if times.size == 0 or times[0] != 0.0:
        raise InvalidArgumentError("Ermakov grid must start at t=0")
    if np.any(np.diff(times) <= 0.0):
        raise InvalidArgumentError("Ermakov grid must be strictly increasing")
    if sigma0_sq <= 0.0:
        raise InvalidQuenchError(f"sigma0_sq must be positive, got {sigma0_sq}")
    if max_step <= 0.0:
        raise InvalidArgumentError(f"max_step must be positive, got {max_step}")

    def rhs(t: float, h: float, v: float):
        return v, sigma0_sq / (h * h * h) - sigma_sq_profile(t) * h

    h, v = 1.0, 0.0
    states = [ErmakovState(h=h, hdot=v, sigma0_sq=sigma0_sq)]
    for t0, t1 in zip(times[:-1], times[1:]):
        n_sub = max(1, int(math.ceil((t1 - t0) / max_step - 1e-9)))
        dt = (t1 - t0) / n_sub
        t = float(t0)
        for _ in range(n_sub):
            k1h, k1v = rhs(t, h, v)
            k2h, k2v = rhs(t + 0.5 * dt, h + 0.5 * dt * k1h, v + 0.5 * dt * k1v)
            k3h, k3v = rhs(t + 0.5 * dt, h + 0.5 * dt * k2h, v + 0.5 * dt * k2v)
            k4h, k4v = rhs(t + dt, h + dt * k3h, v + dt * k3v)
            h += dt * (k1h + 2.0 * k2h + 2.0 * k3h + k4h) / 6.0
            v += dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
            t += dt
            if not h >= h_floor:
                raise ErmakovSingularityError(
                    f"Ermakov scale fell to {h:.3g} at t={t:.6g}",
                    details={"t": t, "h": h},
                )
        states.append(ErmakovState(h=h, hdot=v, sigma0_sq=sigma0_sq))

    logger.debug(f"Integrated Ermakov equation over {times.size} samples to t={times[-1]:.6g}")
    return states


def central_second_difference(h_values: Sequence[float], step: float) -> np.ndarray:
    """h'' at the interior points of a uniform grid."""
    h = np.asarray(h_values, dtype=float)
    return (h[2:] - 2.0 * h[1:-1] + h[:-2]) / (step * step)


def ermakov_residual(state: ErmakovState, hddot_estimate: float, sigma_sq: float) -> float:
    """|h'' + sigma^2 h - sigma0^2 / h^3|"""
    return abs(hddot_estimate + sigma_sq * state.h - state.sigma0_sq / state.h ** 3)
