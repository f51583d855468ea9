import argparse
import os
import sys
from typing import Optional

from covering_lab.commands.config import ExperimentConfig, load_config
from covering_lab.commands.runners import RunResult, run_command
from covering_lab.common.exceptions import CoveringLabError
from covering_lab.common.response.codes import ExitCode
from covering_lab.common.response.schemas import EmpiricalBlock, ExperimentReport, TheoryBlock
from covering_lab.utils.enums import Command
from covering_lab.utils.env import env_var
from covering_lab.utils.error_logging import log_critical, log_exception, log_run, log_warning
from covering_lab.utils.file import write_csv, write_json
from covering_lab.utils.sentry import SentryService

SUMMARY_FILE = "summary.json"
SCALES_FILE = "scales.csv"
REPLICAS_FILE = "replicas.csv"

COMMAND_HELP = {
    Command.PREDICT: "Theoretical dimensions, regimes and bounds for the config",
    Command.COVER_DIM: "Box dimension of the covering-set proxy against its prediction",
    Command.HIT: "Hitting frequency of the target against the predicted regime",
    Command.INTERSECT_DIM: "Dimension of proxy and target intersections against the predicted value",
    Command.BAD_CASE: "Aligned rectangles against a line: projection counts and snowflake reclassification",
    Command.ROTATE: "Aligned against randomly rotated rectangles on shared streams",
    Command.PERCOLATE: "Fractal percolation survival and intersection dimension",
}


def build_report(config: ExperimentConfig, result: RunResult) -> ExperimentReport:
    return ExperimentReport(
        command=config.command.value,
        seed=config.seed,
        config=config.model_dump(mode="json"),
        theory=TheoryBlock(**result.theory),
        empirical=EmpiricalBlock(**result.empirical),
    )


def write_reports(out: str, report: ExperimentReport, result: RunResult):
    write_json(os.path.join(out, SUMMARY_FILE), report)
    write_csv(os.path.join(out, SCALES_FILE), ("replica", "j", "N_j"), (
        (outcome.replica, j, count)
        for outcome in result.outcomes if outcome.estimate is not None
        for j, count in outcome.estimate.counts.items()
    ))
    write_csv(os.path.join(out, REPLICAS_FILE), ("replica", "hit", "slope", "cells"), (
        (outcome.replica, outcome.hit, outcome.slope, outcome.cells) for outcome in result.outcomes
    ))


def run(config: ExperimentConfig, out: str, threads: Optional[int] = None) -> ExperimentReport:
    """Run one experiment and write summary.json, scales.csv and replicas.csv into ``out``."""
    result = run_command(config, threads)
    report = build_report(config, result)
    write_reports(out, report, result)
    return report


def add_arguments(parser: argparse.ArgumentParser):
    subparsers = parser.add_subparsers(dest='command', description='Covering set experiments')

    for command in Command:
        command_parser = subparsers.add_parser(command.value, help=COMMAND_HELP[command])
        command_parser.add_argument(
            "--config",
            type=str,
            required=True,
            help="Path of the JSON experiment config"
        )
        command_parser.add_argument(
            "--seed",
            type=int,
            help="Master seed (unsigned 64-bit); overrides the config"
        )
        command_parser.add_argument(
            "--replicas",
            type=int,
            help="Number of replicas; overrides the config"
        )
        command_parser.add_argument(
            "--threads",
            type=int,
            help="Replica worker threads (default COVERING_THREADS); reports do not depend on it"
        )
        command_parser.add_argument(
            "--out",
            type=str,
            default="out",
            help="Directory for summary.json, scales.csv and replicas.csv"
        )
    return parser


def init_sentry():
    dsn = env_var('SENTRY_DSN')
    if dsn:
        SentryService().init(dsn)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Random covering set experiments.")
    parser = add_arguments(parser)

    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return ExitCode.INVALID_CONFIG
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return ExitCode.INVALID_CONFIG

    init_sentry()
    seed = args.seed
    try:
        config = load_config(args.config, command=args.command, seed=args.seed, replicas=args.replicas)
        seed = config.seed
        run(config, args.out, args.threads)
    except CoveringLabError as e:
        log_warning("%s failed: %s", args.command, e)
        log_run(args.command, seed, "error", code=e.exit_code)
        print(f"error: {e}", file=sys.stderr)
        for detail in getattr(e, "errors", []):
            print(f"  {detail.field}: {detail.message}", file=sys.stderr)
        return e.exit_code
    except MemoryError as e:
        log_critical(e)
        log_run(args.command, seed, "error", code=ExitCode.RESOURCE_CAP)
        print("error: out of memory; lower the grid depth or COVERING_GRID_BITS_CAP", file=sys.stderr)
        return ExitCode.RESOURCE_CAP
    except Exception as e:
        log_exception(e)
        log_run(args.command, seed, "error", code=ExitCode.INTERNAL_ERROR)
        print(f"internal error: {e}", file=sys.stderr)
        return ExitCode.INTERNAL_ERROR

    log_run(args.command, seed, "ok", out=args.out)
    return ExitCode.SUCCESS


if __name__ == "__main__":
    sys.exit(main())
