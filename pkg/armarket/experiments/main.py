"""
armarket command line.

Usage:
    armarket run --config configs/fig1_ar_static.json [--seed 1] [--out runs/fig1] [--set noise.mean=2] [--track]
    armarket compare runs/fig1 series:lam=0.4,order=12 [--quantity wealth] [--tolerance ks=0.01]
    armarket compare runs/ccm-tagged runs/cc-0.4 --quantity noise
    armarket analytic [--config configs/analytic_curves.json] [--set analytic.lam=0.6]
    armarket schema

Exit codes:
    0  success
    1  configuration error (schema violation, invalid model parameters)
    2  runtime error (I/O, numerical resolution, estimator domain)
    3  comparison outside tolerance
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from armarket.analytics.series import AnalyticsDomainError
from armarket.dynamics.population import ConfigurationError
from armarket.experiments import artifacts
from armarket.experiments.compare import compare, parse_tolerances
from armarket.experiments.overrides import apply_overrides
from armarket.experiments.runner import run_experiment
from armarket.experiments.schema import ConfigError, ExperimentConfig, json_schema, load_config
from armarket.noise.spec import ScheduleDomainError
from armarket.settings import LOG_LEVEL, MLFLOW_TRACKING_URI, OUTPUT_DIR

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_TOLERANCE = 3

CONFIG_ERRORS = (ConfigError, ConfigurationError, ScheduleDomainError, AnalyticsDomainError)


def _read_config(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def build_config(
    path: Optional[str],
    overrides: Optional[List[str]] = None,
    seed: Optional[int] = None,
    experiment: Optional[str] = None,
) -> ExperimentConfig:
    """Config file + ``--set`` overrides + ``--seed``, validated."""
    raw = _read_config(path)
    if experiment is not None:
        raw.setdefault("experiment", experiment)
    raw = apply_overrides(raw, overrides or [])
    if seed is not None:
        raw["seed"] = seed
    return load_config(raw)


def resolve_run_dir(config: ExperimentConfig, out: Optional[str]) -> Path:
    if out:
        return Path(out)
    if config.output.dir:
        return Path(config.output.dir)
    name = config.output.name or f"{config.experiment}-seed{config.seed}"
    return OUTPUT_DIR / name


def _execute(config: ExperimentConfig, out: Optional[str], track: bool) -> int:
    run_dir = resolve_run_dir(config, out)
    result = run_experiment(config, run_dir)
    if track or MLFLOW_TRACKING_URI:
        from armarket.tracking.mlflow_client import track_run

        track_run(
            experiment=config.experiment,
            run_name=run_dir.name,
            config=config.resolved(),
            summary=result.summary,
            run_dir=run_dir,
        )
    print(run_dir / artifacts.SUMMARY_FILE)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = build_config(args.config, args.set, args.seed)
    return _execute(config, args.out, args.track)


def cmd_analytic(args: argparse.Namespace) -> int:
    config = build_config(args.config, args.set, args.seed, experiment="analytic-curves")
    if config.experiment != "analytic-curves":
        raise ConfigError("the analytic subcommand only runs analytic-curves", path="experiment")
    return _execute(config, args.out, args.track)


def cmd_compare(args: argparse.Namespace) -> int:
    report = compare(
        Path(args.run_a),
        args.target,
        quantity=args.quantity,
        tolerances=parse_tolerances(args.tolerance),
    )
    text = artifacts.dumps(report.to_dict())
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_TOLERANCE


def cmd_schema(args: argparse.Namespace) -> int:
    sys.stdout.write(artifacts.dumps(json_schema()))
    return EXIT_OK


def _add_run_options(parser: argparse.ArgumentParser, config_required: bool) -> None:
    parser.add_argument("--config", required=config_required, help="Experiment configuration JSON")
    parser.add_argument("--seed", type=int, default=None, help="Override the master seed")
    parser.add_argument("--out", default=None, help="Run directory (default: $ARMARKET_OUTPUT_DIR/<experiment>-seed<seed>)")
    parser.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="Dotted-path override, e.g. --set noise.mean=2 (repeatable)",
    )
    parser.add_argument("--track", action="store_true", help="Log the run to MLflow")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="armarket",
        description="AR market and kinetic exchange wealth-distribution experiments",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run one experiment")
    _add_run_options(run, config_required=True)
    run.set_defaults(func=cmd_run)

    analytic = sub.add_parser("analytic", help="Tabulate analytic curves (analytic-curves experiment)")
    _add_run_options(analytic, config_required=False)
    analytic.set_defaults(func=cmd_analytic)

    cmp = sub.add_parser("compare", help="Compare a run with another run or an analytic reference")
    cmp.add_argument("run_a", help="Run directory")
    cmp.add_argument("target", help="Run directory or reference such as series:lam=0.4,order=12")
    cmp.add_argument("--quantity", choices=["wealth", "noise"], default="wealth")
    cmp.add_argument(
        "--tolerance", action="append", default=None, metavar="METRIC=VALUE",
        help="Pass threshold, e.g. ks=0.01 or mean=0.05 (default ks=0.02)",
    )
    cmp.add_argument("--report", default=None, help="Also write the report JSON here")
    cmp.set_defaults(func=cmd_compare)

    schema = sub.add_parser("schema", help="Print the experiment configuration JSON schema")
    schema.set_defaults(func=cmd_schema)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        return args.func(args)
    except CONFIG_ERRORS as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except Exception as exc:
        logger.error("run failed: %s", exc, exc_info=args.verbose)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
