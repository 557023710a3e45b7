"""
Flat-file output: canonical CSV per run, JSON reports and optional SVG plots.
"""

import csv
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from models import CANONICAL_COLUMNS, DynamicsRecord, SweepResult
from settings import settings

logger = logging.getLogger(__name__)


def format_value(value, float_format: Optional[str] = None) -> str:
    """Render one CSV cell; booleans as true/false, floats with a fixed spec."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    return format(float(value), float_format or settings.float_format)


def record_rows(
    records: Iterable[DynamicsRecord],
    extra_columns: Sequence[str] = (),
    float_format: Optional[str] = None,
) -> List[List[str]]:
    columns = list(CANONICAL_COLUMNS) + list(extra_columns)
    rows = [columns]
    for record in records:
        data = record.model_dump()
        rows.append([format_value(data[c], float_format) for c in columns])
    return rows


def write_records_csv(
    records: Iterable[DynamicsRecord],
    path: Path,
    extra_columns: Sequence[str] = (),
    float_format: Optional[str] = None,
) -> Path:
    """Write records with the canonical header plus any extra columns."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerows(record_rows(records, extra_columns, float_format))
    logger.debug(f"Wrote {path}")
    return path


def value_label(value: float) -> str:
    """Stable file-name fragment for a swept value."""
    return format(value, "g").replace("-", "m")


def write_sweep(
    result: SweepResult,
    out_dir: Path,
    stem: str,
    extra_columns: Sequence[str] = (),
) -> List[Path]:
    """One CSV per successful value, named <stem>_<axis>_<value>.csv."""
    out_dir = Path(out_dir)
    paths = []
    for entry in result.entries:
        if not entry.ok:
            logger.warning(f"Skipping {result.axis.value}={entry.value:g}: {entry.error}")
            continue
        name = f"{stem}_{result.axis.value}_{value_label(entry.value)}.csv"
        paths.append(write_records_csv(entry.records, out_dir / name, extra_columns))
    return paths


def write_json(payload: str, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(payload)
        f.write("\n")
    return path


def plot_series(
    series: Dict[str, List[DynamicsRecord]],
    quantity: str,
    path: Path,
    title: str = "",
) -> Path:
    """Single SVG line plot of one quantity for several labelled runs."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "quench-dynamics"
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        for label, records in series.items():
            ax.plot([r.t for r in records], [getattr(r, quantity) for r in records], label=label, linewidth=1.0)
        ax.set_xlabel("t")
        ax.set_ylabel(quantity)
        if title:
            ax.set_title(title)
        ax.legend(fontsize="small")
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.debug(f"Plotted {quantity} to {path}")
    return path
