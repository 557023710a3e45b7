"""
Command-line entry point.

    python cli.py evolve   --config scenario.toml --out output/
    python cli.py sweep    --config scenario.toml --axis J_f --values 0.5,0.9,1.2 --out output/
    python cli.py figures  --which all --out output/ [--plot]
    python cli.py validate [--json] [--out output/]

Exit codes: 0 success, 1 config error, 2 numeric failure, 3 validation failure.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

# Add current directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from evolver import init_evolver
from exceptions import ConfigError, NumericError, QuenchDynamicsError, ValidationFailedError
from exporter import plot_series, write_json, write_records_csv, write_sweep
from figures import parse_which, run_figures
from logging_config import configure_logging
from models import EntropyUnits, ScenarioConfig, SweepAxis
from settings import settings
from validation import run_validate

logger = logging.getLogger(__name__)

EXIT_OK = 0


def _parse_values(text: str) -> List[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"--values must be a comma-separated list of numbers, got '{text}'") from e
    if not values:
        raise ConfigError("--values is empty")
    return values


def _load_config(args: argparse.Namespace) -> ScenarioConfig:
    config = ScenarioConfig.from_file(args.config)
    if getattr(args, "bits", False):
        config = config.model_copy(update={"entropy_units": EntropyUnits.BITS})
    return config


def cmd_evolve(args: argparse.Namespace) -> int:
    config = _load_config(args)
    records = init_evolver(args.workers).run_evolve(config)
    out_dir = Path(args.out)
    stem = Path(args.config).stem
    path = write_records_csv(records, out_dir / f"{stem}.csv", config.extra_columns)
    if args.plot or settings.emit_svg:
        for quantity in config.outputs:
            plot_series({stem: records}, quantity.value, out_dir / f"{stem}_{quantity.value}.svg")
    print(f"Wrote {len(records)} records to {path}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    axis = SweepAxis(args.axis)
    result = init_evolver(args.workers).run_sweep(config, axis, _parse_values(args.values))
    paths = write_sweep(result, Path(args.out), Path(args.config).stem, config.extra_columns)
    for entry in result.failures:
        print(f"{axis.value}={entry.value:g} failed: {entry.error}: {entry.message}", file=sys.stderr)
    print(f"Wrote {len(paths)} files to {args.out}")
    if result.failures and len(result.failures) == len(result.entries):
        return 2
    return EXIT_OK


def cmd_figures(args: argparse.Namespace) -> int:
    paths = run_figures(parse_which(args.which), Path(args.out), args.plot or settings.emit_svg, init_evolver(args.workers))
    print(f"Wrote {len(paths)} files to {args.out}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    report = run_validate()
    if args.out:
        path = write_json(report.model_dump_json(indent=2), Path(args.out) / "validation.json")
        logger.info(f"Validation report written to {path}")
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        for check in report.checks:
            error = "" if check.error is None else f" error={check.error:.3e}"
            print(f"{check.status.value:>20}  {check.name}{error}  {check.detail}")
        print(f"{len(report.checks) - len(report.failed)}/{len(report.checks)} checks passed "
              f"in {report.runtime_seconds:.1f}s")
    if not report.passed:
        raise ValidationFailedError(f"{len(report.failed)} validation checks failed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quench-dynamics",
        description="Entanglement and uncertainty dynamics of quenched coupled oscillators in a magnetic field",
    )
    parser.add_argument("--log-level", default=None, help="Override the configured log level")
    parser.add_argument("--log-format", choices=["console", "json"], default=None)
    parser.add_argument("--workers", type=int, default=None, help="Worker threads for sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    evolve = sub.add_parser("evolve", help="Evolve one scenario")
    evolve.add_argument("--config", required=True, help="Scenario file (TOML or YAML)")
    evolve.add_argument("--out", default=settings.output_dir)
    evolve.add_argument("--bits", action="store_true", help="Report entropies in bits")
    evolve.add_argument("--plot", action="store_true", help="Also write SVG plots")
    evolve.set_defaults(func=cmd_evolve)

    sweep = sub.add_parser("sweep", help="Sweep one parameter of a scenario")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--axis", required=True, choices=[a.value for a in SweepAxis])
    sweep.add_argument("--values", required=True, help="Comma-separated values")
    sweep.add_argument("--out", default=settings.output_dir)
    sweep.add_argument("--bits", action="store_true")
    sweep.set_defaults(func=cmd_sweep)

    figures = sub.add_parser("figures", help="Reproduce the figure datasets")
    figures.add_argument("--which", default="all", help="1..9, a comma list, or 'all'")
    figures.add_argument("--out", default=settings.output_dir)
    figures.add_argument("--plot", action="store_true")
    figures.set_defaults(func=cmd_figures)

    validate = sub.add_parser("validate", help="Run the validation suite")
    validate.add_argument("--json", action="store_true", help="Print the machine-readable report")
    validate.add_argument("--out", default=None, help="Also write validation.json to this directory")
    validate.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(
        args.log_level or settings.log_level,
        args.log_format or settings.log_format,
        settings.logs_dir,
    )
    try:
        return args.func(args)
    except QuenchDynamicsError as e:
        logger.error(f"{e.code}: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except ArithmeticError as e:
        logger.error(f"{NumericError.code}: floating-point failure: {e}")
        print(f"error: floating-point failure: {e}", file=sys.stderr)
        return NumericError.exit_code


if __name__ == "__main__":
    sys.exit(main())
