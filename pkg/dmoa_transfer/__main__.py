"""Command line interface: run, report and selftest."""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import logging
import sys

from .config import ConfigurationError, load_config
from .const import (
    CONF_OPTIMIZER,
    CONF_OUTPUT,
    CONF_PROBLEMS,
    CONF_SEEDS,
    CONF_VARIANTS,
    CONF_WORKERS,
)
from .coordinator import CellFailed, run_experiment
from .helpers import setup_logging
from .pyDynamicTransfer.synthetic import run_selftest
from .report import ReportError, format_summary, write_report

_LOGGER = logging.getLogger(__package__)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the run, report and selftest subcommands."""
    parser = argparse.ArgumentParser(prog="dmoa-transfer", description=__doc__)
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run the experiment grid")
    run.add_argument("--config", help="YAML experiment configuration")
    run.add_argument("--problem", nargs="+", dest=CONF_PROBLEMS, help="problem names")
    run.add_argument("--tau-t", type=int, dest="tau_t", help="generations between changes")
    run.add_argument("--n-t", type=int, dest="n_t", help="severity of change")
    run.add_argument("--seeds", type=int, dest=CONF_SEEDS, help="number of seeds")
    run.add_argument("--variant", nargs="+", dest=CONF_VARIANTS, help="rtlp, plain, random-restart")
    run.add_argument("--optimizer", dest=CONF_OPTIMIZER, help="optimizer name")
    run.add_argument("--out", dest=CONF_OUTPUT, help="output directory")
    run.add_argument("--workers", type=int, dest=CONF_WORKERS, help="parallel cells")

    report = commands.add_parser("report", help="aggregate run reports")
    report.add_argument("--in", dest="directory", required=True, help="results directory")

    selftest = commands.add_parser("selftest", help="property checks")
    selftest.add_argument("suite", choices=["transfer"])
    selftest.add_argument("--seeds", type=int, default=10)
    return parser


def _run(args: argparse.Namespace) -> int:
    overrides = {
        key: getattr(args, key)
        for key in (
            CONF_PROBLEMS, CONF_SEEDS, CONF_VARIANTS, CONF_OPTIMIZER,
            CONF_OUTPUT, CONF_WORKERS, "tau_t", "n_t",
        )
    }
    try:
        config = load_config(args.config, overrides)
    except ConfigurationError as err:
        _LOGGER.error("%s", err.message)
        return 2
    try:
        run_experiment(config)
    except CellFailed as err:
        _LOGGER.error("%s", err.message)
        return 1
    return 0


def _report(args: argparse.Namespace) -> int:
    try:
        summary, _ = write_report(args.directory)
    except ReportError as err:
        _LOGGER.error("%s", err)
        return 1
    print(format_summary(summary))
    return 0


def _selftest(args: argparse.Namespace) -> int:
    results = run_selftest(args.seeds)
    for result in results:
        print(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.detail}")
    return 0 if all(result.passed for result in results) else 1


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments and dispatch to the subcommand."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    handlers = {"run": _run, "report": _report, "selftest": _selftest}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
