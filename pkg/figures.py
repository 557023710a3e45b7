"""
Figure presets: each figure is a sweep over one axis of a base quench.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from evolver import QuenchEvolver, get_evolver
from exceptions import InvalidArgumentError
from exporter import plot_series, value_label, write_sweep
from models import OutputQuantity, QuenchSpec, ScenarioConfig, SweepAxis, SweepResult

logger = logging.getLogger(__name__)

INITIAL = (1.0, 1.5, 1.1)
FINAL = (1.3, 1.8, 0.9)


@dataclass(frozen=True)
class FigurePreset:
    number: int
    title: str
    final: Tuple[float, float, float]
    omega_c: float
    axis: SweepAxis
    values: Tuple[float, ...]
    quantities: Tuple[OutputQuantity, ...]
    initial: Tuple[float, float, float] = INITIAL
    t_max: float = 30.0
    n_samples: int = 3001

    def config(self) -> ScenarioConfig:
        return ScenarioConfig(
            quench=QuenchSpec.from_values(self.initial, self.final, self.omega_c),
            t_max=self.t_max,
            n_samples=self.n_samples,
            outputs=list(self.quantities),
            label=f"fig{self.number}",
        )


_S_L = (OutputQuantity.S_L,)
_U = (OutputQuantity.U1, OutputQuantity.U2)
_ENT = (OutputQuantity.S_VON, OutputQuantity.NEGATIVITY)

FIGURE_PRESETS: Dict[int, FigurePreset] = {
    1: FigurePreset(1, "Mixedness for several magnetic fields", FINAL, 0.0,
                    SweepAxis.OMEGA_C, (0.0, 0.3, 0.8, 1.5), _S_L),
    2: FigurePreset(2, "Mixedness for several quenched couplings", FINAL, 0.2,
                    SweepAxis.J_F, (0.5, 0.9, 1.2, 2.3, 2.4), _S_L),
    3: FigurePreset(3, "Mixedness for several quenched frequencies", (0.4, 1.8, 0.9), 0.1,
                    SweepAxis.OMEGA_F2, (3.0, 2.5, 2.0, 0.5), _S_L),
    4: FigurePreset(4, "Uncertainty for several magnetic fields", FINAL, 0.0,
                    SweepAxis.OMEGA_C, (0.0, 0.3, 0.8, 1.5), _U),
    5: FigurePreset(5, "Uncertainty for several quenched couplings", FINAL, 0.2,
                    SweepAxis.J_F, (0.5, 0.9, 1.2, 2.3, 2.33), _U),
    6: FigurePreset(6, "Uncertainty for several quenched frequencies", (0.4, 1.8, 0.9), 0.1,
                    SweepAxis.OMEGA_F2, (4.0, 3.0, 2.5, 2.3), _U),
    7: FigurePreset(7, "Entanglement for several magnetic fields", FINAL, 0.0,
                    SweepAxis.OMEGA_C, (0.0, 0.3, 0.8, 1.5, 3.0), _ENT),
    8: FigurePreset(8, "Entanglement for several quenched couplings", FINAL, 0.2,
                    SweepAxis.J_F, (0.5, 0.9, 1.2, 2.3, 2.33), _ENT),
    9: FigurePreset(9, "Entanglement for several quenched frequencies", (1.3, 1.8, 0.9), 0.1,
                    SweepAxis.OMEGA_F2, (3.0, 2.5, 2.3, 2.2), _ENT),
}


def parse_which(which: str) -> List[int]:
    """'all', a single number or a comma list such as '1,4,7'."""
    if which == "all":
        return sorted(FIGURE_PRESETS)
    try:
        numbers = [int(part) for part in which.split(",") if part.strip()]
    except ValueError as e:
        raise InvalidArgumentError(f"Unknown figure selection '{which}'") from e
    unknown = [n for n in numbers if n not in FIGURE_PRESETS]
    if unknown or not numbers:
        raise InvalidArgumentError(
            f"Figures must be in {sorted(FIGURE_PRESETS)} or 'all', got '{which}'"
        )
    return numbers


def run_figure(preset: FigurePreset, evolver: Optional[QuenchEvolver] = None) -> SweepResult:
    evolver = evolver or get_evolver()
    logger.info(f"Figure {preset.number}: {preset.title}")
    return evolver.run_sweep(preset.config(), preset.axis, preset.values)


def run_figures(
    which: Sequence[int],
    out_dir: Path,
    plot: bool = False,
    evolver: Optional[QuenchEvolver] = None,
) -> List[Path]:
    """Write the CSV datasets (and optionally SVG plots) of the selected figures."""
    out_dir = Path(out_dir)
    written: List[Path] = []
    for number in which:
        preset = FIGURE_PRESETS[number]
        result = run_figure(preset, evolver)
        stem = f"fig{number}"
        written.extend(write_sweep(result, out_dir, stem))
        if plot:
            series = {
                f"{preset.axis.value}={value_label(e.value)}": e.records
                for e in result.entries if e.ok
            }
            for quantity in preset.quantities:
                written.append(plot_series(series, quantity.value, out_dir / f"{stem}_{quantity.value}.svg", preset.title))
    return written
