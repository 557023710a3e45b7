"""
Scenario evolution: turns a quench scenario into a time series of records.
Sweeps run one evolution per value on a bounded thread pool.
"""

import logging
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from ermakov import ErmakovState, ModeScale, mode_scale, quench_h
from exceptions import InvalidQuenchError, NumericError, QuenchDynamicsError
from gaussian_vacuum import (
    EntropyReport,
    generalized_entropies,
    marginal_purity,
    reduced_kernel,
    vacuum_coefficients,
    von_neumann
)
from models import (
    DynamicsRecord,
    EntropyUnits,
    ScenarioConfig,
    SweepAxis,
    SweepEntry,
    SweepResult
)
from param_model import NormalModes, is_hyperbolic, normal_modes
from settings import settings
from symplectic import log_negativity_from_SL, standard_form_alpha
from wigner import WignerCoefficients, uncertainty_product, wigner_coefficients

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class InstantState:
    """
    Everything computed for one sample time, before capping and unit conversion.

    scale1, scale2 and wigner are None once a hyperbolic mode has run past
    floating-point range (saturated=True).
    """
    t: float
    phi: float
    scale1: Optional[ModeScale]
    scale2: Optional[ModeScale]
    h1: float
    h2: float
    entropy: EntropyReport
    alpha: float
    wigner: Optional[WignerCoefficients]
    U1: float
    U2: float
    S_BT2: float
    S_R2: float
    saturated: bool = False


class QuenchEvolver:
    """
    Evaluates scenarios sample by sample.

    Values whose magnitude exceeds divergence_cap (or that are not finite)
    are capped and the record is flagged diverged.
    """

    def __init__(
        self,
        max_workers: Optional[int] = None,
        divergence_cap: Optional[float] = None,
        degenerate_tol: Optional[float] = None,
    ):
        self.max_workers = max_workers or settings.max_workers
        self.divergence_cap = divergence_cap or settings.divergence_cap
        self.degenerate_tol = degenerate_tol or settings.degenerate_tol

        self._executor: Optional[ThreadPoolExecutor] = None
        self._lock = threading.Lock()
        self.stats = {
            "runs": 0,
            "records": 0,
            "diverged_records": 0,
            "sweeps": 0,
            "failed_values": 0,
        }

        logger.info(f"QuenchEvolver initialized with {self.max_workers} workers")

    # =====================================================================
    # Single scenario
    # =====================================================================

    @staticmethod
    def modes(config: ScenarioConfig) -> Tuple[NormalModes, NormalModes]:
        """Initial and final normal modes of a scenario."""
        return normal_modes(config.quench.initial), normal_modes(config.quench.final)

    def check_quench(self, config: ScenarioConfig) -> Tuple[NormalModes, NormalModes]:
        """
        Reject scenarios without a normalizable initial ground state.

        Raises:
            InvalidQuenchError: if sigma_i^2 + omega_c^2 <= 0 for either mode
        """
        initial, final = self.modes(config)
        wc_sq = config.omega_c ** 2
        for idx, sigma_sq in enumerate((initial.sigma1_sq, initial.sigma2_sq), start=1):
            if sigma_sq + wc_sq <= 0.0:
                raise InvalidQuenchError(
                    f"Initial mode {idx} has sigma^2 + omega_c^2 = {sigma_sq + wc_sq:.6g} <= 0",
                    details={"mode": idx, "value": sigma_sq + wc_sq},
                )
        return initial, final

    def hyperbolic_modes(self, config: ScenarioConfig) -> List[bool]:
        _, final = self.modes(config)
        return [
            is_hyperbolic(final.sigma1_sq, config.omega_c),
            is_hyperbolic(final.sigma2_sq, config.omega_c),
        ]

    def evaluate(
        self,
        config: ScenarioConfig,
        t: float,
        modes: Optional[Tuple[NormalModes, NormalModes]] = None,
    ) -> InstantState:
        """Full chain at one time: modes, Ermakov scales, vacuum, kernel, entropies, Wigner."""
        initial, final = modes or self.check_quench(config)
        omega_c = config.omega_c
        phi = initial.phi if t == 0.0 else final.phi

        st1 = quench_h(initial.sigma1_sq, final.sigma1_sq, omega_c, t, self.degenerate_tol)
        st2 = quench_h(initial.sigma2_sq, final.sigma2_sq, omega_c, t, self.degenerate_tol)
        try:
            return self._closed_form_chain(t, phi, st1, st2)
        except (ArithmeticError, ValueError) as e:
            # only a hyperbolic mode can leave floating-point range
            if not any(is_hyperbolic(sq, omega_c) for sq in (final.sigma1_sq, final.sigma2_sq)):
                raise
            logger.debug(f"Saturated state at t={t:.6g} (h1={st1.h:.3g}, h2={st2.h:.3g}): {e}")
            return self._saturated_state(t, phi, st1, st2)

    @staticmethod
    def _closed_form_chain(t: float, phi: float, st1: ErmakovState, st2: ErmakovState) -> InstantState:
        scale1, scale2 = mode_scale(st1), mode_scale(st2)

        vc = vacuum_coefficients(phi, scale1, scale2)
        kernel = reduced_kernel(vc)
        purity = marginal_purity(vc)
        S_L = 1.0 - purity
        gamma = kernel.gamma

        S_von = _guarded(von_neumann, gamma)
        negativity = _guarded(lambda s: log_negativity_from_SL(s, purity), S_L)
        wc = wigner_coefficients(phi, scale1, scale2, vc)
        U1 = _guarded(lambda s: uncertainty_product(s, wc.gamma1, purity=purity).U, S_L)
        U2 = _guarded(lambda s: uncertainty_product(s, wc.gamma2, purity=purity).U, S_L)
        S_BT2, S_R2 = _guarded(lambda g: generalized_entropies(g, 2.0), gamma, pair=True)

        return InstantState(
            t=t,
            phi=phi,
            scale1=scale1,
            scale2=scale2,
            h1=st1.h,
            h2=st2.h,
            entropy=EntropyReport(purity=purity, S_L=S_L, gamma=gamma, S_von=S_von, negativity=negativity),
            alpha=standard_form_alpha(phi, scale1, scale2).alpha,
            wigner=wc,
            U1=U1,
            U2=U2,
            S_BT2=S_BT2,
            S_R2=S_R2,
        )

    @staticmethod
    def _saturated_state(t: float, phi: float, st1: ErmakovState, st2: ErmakovState) -> InstantState:
        """Maximally mixed limit of a runaway mode: purity 0, unbounded entropies."""
        return InstantState(
            t=t,
            phi=phi,
            scale1=None,
            scale2=None,
            h1=st1.h,
            h2=st2.h,
            entropy=EntropyReport(purity=0.0, S_L=1.0, gamma=1.0, S_von=math.inf, negativity=math.inf),
            alpha=math.inf,
            wigner=None,
            U1=math.inf,
            U2=math.inf,
            S_BT2=1.0,
            S_R2=math.inf,
            saturated=True,
        )

    def sample_times(self, config: ScenarioConfig) -> np.ndarray:
        return np.linspace(0.0, config.t_max, config.n_samples)

    def to_record(self, state: InstantState, units: EntropyUnits) -> DynamicsRecord:
        scale = 1.0 / LN2 if units == EntropyUnits.BITS else 1.0
        values = {
            "S_L": state.entropy.S_L,
            "S_von": state.entropy.S_von * scale,
            "negativity": state.entropy.negativity * scale,
            "U1": state.U1,
            "U2": state.U2,
            "alpha": state.alpha,
            "gamma": state.entropy.gamma,
            "gamma1": state.wigner.gamma1 if state.wigner else math.nan,
            "gamma2": state.wigner.gamma2 if state.wigner else math.nan,
            "h1": state.h1,
            "h2": state.h2,
            "S_BT2": state.S_BT2,
            "S_R2": state.S_R2 * scale,
        }
        diverged = False
        for key, value in values.items():
            capped = self._cap(value)
            if capped != value:
                diverged = True
            values[key] = capped
        return DynamicsRecord(t=state.t, diverged=diverged, **values)

    def _cap(self, value: float) -> float:
        if math.isnan(value):
            return self.divergence_cap
        if abs(value) > self.divergence_cap:
            return math.copysign(self.divergence_cap, value)
        return value

    def run_evolve(self, config: ScenarioConfig) -> List[DynamicsRecord]:
        """
        Evolve one scenario over its sample times.

        Raises:
            InvalidQuenchError: if the initial state is not normalizable
            NumericError: if a mode sits on the hyperbolic threshold
        """
        start = time.perf_counter()
        modes = self.check_quench(config)
        hyperbolic = self.hyperbolic_modes(config)
        if any(hyperbolic):
            logger.warning(
                f"Scenario {config.label or ''} has hyperbolic modes {hyperbolic}; "
                f"entanglement grows without bound"
            )

        records = [
            self.to_record(self.evaluate(config, float(t), modes), config.entropy_units)
            for t in self.sample_times(config)
        ]
        n_diverged = sum(1 for r in records if r.diverged)
        if n_diverged:
            logger.warning(f"{n_diverged} of {len(records)} samples capped at {self.divergence_cap:g}")

        with self._lock:
            self.stats["runs"] += 1
            self.stats["records"] += len(records)
            self.stats["diverged_records"] += n_diverged

        logger.info(
            f"Evolved {len(records)} samples to t={config.t_max:g} "
            f"(omega_c={config.omega_c:g}) in {(time.perf_counter() - start) * 1000:.1f} ms"
        )
        return records

    # =====================================================================
    # Sweeps
    # =====================================================================

    def _get_executor(self) -> ThreadPoolExecutor:
        with self._lock:
            if self._executor is None:
                self._executor = ThreadPoolExecutor(
                    max_workers=self.max_workers, thread_name_prefix="quench"
                )
            return self._executor

    def _sweep_value(self, config: ScenarioConfig, axis: SweepAxis, value: float) -> SweepEntry:
        try:
            swept = config.with_axis_value(axis, value)
            records = self.run_evolve(swept)
            return SweepEntry(
                value=value,
                records=records,
                hyperbolic=self.hyperbolic_modes(swept),
                diverged=any(r.diverged for r in records),
            )
        except ValidationError as e:
            logger.warning(f"Sweep {axis.value}={value:g} rejected: {e.errors()[0]['msg']}")
            return SweepEntry(value=value, error="CONFIG_ERROR", message=str(e))
        except QuenchDynamicsError as e:
            logger.warning(f"Sweep {axis.value}={value:g} failed: {e.message}")
            return SweepEntry(value=value, error=e.code, message=e.message)
        except ArithmeticError as e:
            logger.error(f"Sweep {axis.value}={value:g} hit a floating-point failure: {e}")
            return SweepEntry(value=value, error=NumericError.code, message=str(e))

    def run_sweep(self, config: ScenarioConfig, axis: SweepAxis, values: Sequence[float]) -> SweepResult:
        """One evolution per value, in parallel; entries keep the input order."""
        axis = SweepAxis(axis)
        executor = self._get_executor()
        entries = list(executor.map(lambda v: self._sweep_value(config, axis, float(v)), values))

        failed = sum(1 for e in entries if not e.ok)
        with self._lock:
            self.stats["sweeps"] += 1
            self.stats["failed_values"] += failed
        logger.info(f"Sweep over {axis.value} finished: {len(entries) - failed}/{len(entries)} values succeeded")
        return SweepResult(axis=axis, entries=entries)

    def get_stats(self) -> Dict[str, Any]:
        with self._lock:
            return dict(self.stats)

    def close(self) -> None:
        with self._lock:
            if self._executor is not None:
                self._executor.shutdown(wait=True)
                self._executor = None


def _guarded(fn, arg: float, pair: bool = False):
    """Evaluate fn, mapping out-of-domain arguments (S_L or gamma at 1) to inf."""
    try:
        return fn(arg)
    except (QuenchDynamicsError, ValueError, OverflowError, ZeroDivisionError):
        return (math.inf, math.inf) if pair else math.inf


# Global evolver instance
evolver: Optional[QuenchEvolver] = None


def get_evolver() -> QuenchEvolver:
    """Get or create the evolver instance."""
    global evolver
    if evolver is None:
        evolver = QuenchEvolver()
    return evolver


def init_evolver(max_workers: Optional[int] = None) -> QuenchEvolver:
    """Replace the evolver instance, e.g. after settings changed."""
    global evolver
    if evolver is not None:
        evolver.close()
    evolver = QuenchEvolver(max_workers=max_workers)
    return evolver
