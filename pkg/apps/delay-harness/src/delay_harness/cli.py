from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from sts_numerics import NumericError, StsError

from .config import ExperimentConfig, load_config, load_preset
from .dataset import DataSet, load_datasets
from .outputs import emit_outputs
from .runner import run_scenario
from .settings import HarnessSettings

logger = logging.getLogger("delay_harness")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sts-delay", description="Delay-time sweeps of the narrowed waveguide.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="sweep the configured models and write curves, residues and figure")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenario", choices=["fig1a", "fig1b"], help="built-in scenario")
    source.add_argument("--config", type=Path, help="experiment file with flat key: value pairs")
    run.add_argument("--data", type=Path, help="digitised points, header nu_ghz,delay_ns,run")
    run.add_argument("--out", type=Path, help="output directory (overrides out_dir)")
    run.add_argument("--models", help="comma-separated subset of sts,pt,bl")
    run.add_argument("--ell-m", type=float, help="path before the narrowing, in metres")
    return parser


def _configure_logging(settings: HarnessSettings, verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    if not logging.getLogger().handlers:
        logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s %(message)s")
    logging.getLogger().setLevel(level)


def _load(args: argparse.Namespace) -> tuple[ExperimentConfig, List[DataSet]]:
    cfg = load_preset(args.scenario) if args.scenario else load_config(args.config)
    cfg = cfg.with_overrides(models=args.models, ell_m=args.ell_m)
    data = load_datasets(args.data) if args.data else []
    return cfg, data


def run_command(args: argparse.Namespace, settings: HarnessSettings) -> int:
    try:
        cfg, data = _load(args)
    except (ValidationError, StsError, ValueError, OSError) as exc:
        logger.error("invalid input | error=%s", exc)
        return EXIT_INVALID
    try:
        result = run_scenario(cfg, data, settings)
        emit_outputs(result, cfg, args.out)
    except NumericError as exc:
        logger.error("numeric failure | error=%s", exc)
        return EXIT_NUMERIC
    except (StsError, ValueError) as exc:
        logger.error("invalid input | error=%s", exc)
        return EXIT_INVALID
    if result.failed_points:
        logger.error("sweep points failed | count=%d", result.failed_points)
        return EXIT_NUMERIC
    for report in result.reports:
        ranking = ", ".join(f"{e.model}={e.delta_normalized}" for e in report.entries)
        logger.info("residues | run=%s %s", report.run or "-", ranking)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = HarnessSettings()
    except ValidationError as exc:
        print(f"invalid STS_* environment: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _configure_logging(settings, args.verbose)
    if args.command == "run":
        return run_command(args, settings)
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
