"""Command-line surface: run, check-axioms, stabilize."""
import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional

from ..constants import APP_NAME, APP_VERSION, SCHEMA_VERSION
from ..errors import ConeStabError, ConfigError
from ..models.config import Engine, NoiseKind
from ..models.element import NumericMode
from ..services.harness import ExperimentRunner, check_instance_axioms, export_report
from ..services.harness import report_to_csv, report_to_json
from ..utils.config_manager import ConfigManager
from ..utils.logging_config import setup_logging

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the three subcommands."""
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Locally convex cone algebra and Pexider stabilization experiments",
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="More log output on stderr (-vv: debug)"
    )
    parser.add_argument("--log-file", type=Path, help="Also write a detailed rotating log file")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="Run an experiment described by a config file")
    run_p.add_argument("--config", type=Path, required=True, help="JSON or TOML config file")
    _add_output_options(run_p)

    axioms_p = sub.add_parser("check-axioms", help="Check the cone axioms of a named instance")
    axioms_p.add_argument("--instance", required=True, help="Instance name, e.g. ext-reals")
    axioms_p.add_argument("--sample-size", type=int, default=200)
    axioms_p.add_argument("--scalars", type=int, default=20)
    axioms_p.add_argument("--seed", type=int, default=0)
    axioms_p.add_argument(
        "--numeric-mode", choices=[m.value for m in NumericMode], default=NumericMode.RATIONAL.value
    )
    _add_output_options(axioms_p)

    stab_p = sub.add_parser("stabilize", help="Stabilize a noisy linear triple")
    stab_p.add_argument("--instance", default="ext-reals")
    stab_p.add_argument("--base", type=float, default=3.0, help="Linear coefficient c")
    stab_p.add_argument("--eps", type=float, default=0.25, help="Noise magnitude eps0")
    stab_p.add_argument("--seed", type=int, default=7)
    stab_p.add_argument("--depth", type=int, default=24)
    stab_p.add_argument("--engine", choices=[e.value for e in Engine], default=Engine.CONE.value)
    stab_p.add_argument(
        "--noise", choices=[k.value for k in NoiseKind], default=NoiseKind.BOUNDED_HASH.value
    )
    stab_p.add_argument("--v-scale", type=float, help="Coefficient of v (default max(1, 4 eps0))")
    stab_p.add_argument(
        "--numeric-mode", choices=[m.value for m in NumericMode], default=NumericMode.RATIONAL.value
    )
    _add_output_options(stab_p)
    return parser


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, help="Write the report here instead of stdout")
    parser.add_argument("--format", choices=["json", "csv"], default="json")


def _emit(report, out: Optional[Path], fmt: str = "json") -> None:
    if out is not None:
        export_report(report, out, fmt)
        return
    text = report_to_csv(report) if fmt == "csv" else report_to_json(report)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_failure(error: ConeStabError) -> int:
    payload = {
        "schema": SCHEMA_VERSION,
        "status": "failure",
        "exit_code": error.exit_code,
        "failure": error.to_dict(),
    }
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return error.exit_code


def cmd_run(args: argparse.Namespace) -> int:
    """conestab run --config <path>."""
    config = ConfigManager(args.config).load()
    report = ExperimentRunner().run(config)
    _emit(report, args.out, args.format)
    return report.exit_code


def cmd_check_axioms(args: argparse.Namespace) -> int:
    """conestab check-axioms --instance <name>; exit 0 iff every law holds."""
    report = check_instance_axioms(
        args.instance,
        sample_size=args.sample_size,
        scalar_count=args.scalars,
        seed=args.seed,
        mode=NumericMode(args.numeric_mode),
    )
    _emit(report, args.out, args.format)
    return 0 if report.passed else 2


def cmd_stabilize(args: argparse.Namespace) -> int:
    """conestab stabilize: a linear base with bounded noise, built from flags."""
    v_scale = args.v_scale if args.v_scale is not None else max(1.0, 4 * args.eps)
    if not math.isfinite(v_scale):
        raise ConfigError(f"v-scale must be finite, got {v_scale}")
    config = ConfigManager.parse(
        {
            "instance-name": args.instance,
            "base-map": {"coefficient": args.base},
            "noise": {"kind": args.noise, "magnitude": args.eps, "seed": args.seed},
            "v-scale": v_scale,
            "depth": args.depth,
            "engine": args.engine,
            "numeric-mode": args.numeric_mode,
        }
    )
    report = ExperimentRunner().run(config)
    _emit(report, args.out, args.format)
    return report.exit_code


COMMANDS = {
    "run": cmd_run,
    "check-axioms": cmd_check_axioms,
    "stabilize": cmd_stabilize,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    setup_logging(log_file=args.log_file, level=level)
    logger.info(f"{APP_NAME} v{APP_VERSION}: {args.command}")

    try:
        return COMMANDS[args.command](args)
    except ConeStabError as e:
        logger.error(f"{e.kind}: {e}")
        return _emit_failure(e)
