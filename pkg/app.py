#!/usr/bin/env python3
"""
SPH open-boundary solver - command line entry point

    run <config> [--until T] [--out DIR] [--workers N] [--dp X]
    validate <case> [--until T] [--out DIR] [--workers N] [--dp X]
    list

Exit codes: 0 success, 1 failed validation, 2 configuration error,
3 numerical abort.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from config.app_settings import get_settings
from scenarios import build_scenario, list_scenarios, load_scenario, run_scenario, scenario_path
from solver.exceptions import ConfigurationError, NumericalAbortError
from validation.harness import reference_profile, validate_case

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_ABORT = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'

logger = logging.getLogger(__name__)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--until', type=float, default=None, help="End time in seconds (default: scenario end_time)")
    parser.add_argument('--out', type=Path, default=None, help="Output directory for snapshots and probes")
    parser.add_argument('--workers', type=int, default=None, help="Worker threads for rate evaluation")
    parser.add_argument('--dp', type=float, default=None, help="Override the particle spacing in metres")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='sph-buffers',
        description="Weakly-compressible SPH with arbitrary-positioned inflow/outflow buffers",
    )
    parser.add_argument('--log-level', default=None, help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help="Run a scenario file or built-in scenario")
    run.add_argument('config', help="Scenario YAML path or built-in name")
    _add_run_options(run)

    validate = commands.add_parser('validate', help="Run a built-in scenario and print its error table")
    validate.add_argument('case', help="Built-in scenario name")
    _add_run_options(validate)

    commands.add_parser('list', help="List built-in scenarios")
    return parser


def configure_logging(level: Optional[str] = None) -> None:
    level_name = (level or get_settings().log_level).upper()
    logging.basicConfig(level=getattr(logging, level_name, logging.INFO), format=LOG_FORMAT)


def cmd_run(args: argparse.Namespace) -> int:
    settings = get_settings()
    config = load_scenario(scenario_path(args.config), dp=args.dp)
    built = build_scenario(config)
    out_dir = args.out or Path(settings.run.output_dir) / config.name
    result = run_scenario(
        built,
        until=args.until,
        out_dir=out_dir,
        workers=args.workers or settings.run.workers,
        reference=reference_profile(config, built.props),
        precision=settings.run.snapshot_precision,
        max_substeps=settings.run.max_substeps,
    )
    logger.info(f"💾 {len(result.snapshots)} snapshots and {len(result.probes)} probe profiles in {out_dir}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    report = validate_case(
        args.case, dp=args.dp, until=args.until,
        workers=args.workers or get_settings().run.workers, out_dir=args.out,
    )
    print(report.format_table())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_list(args: argparse.Namespace) -> int:
    scenarios = list_scenarios()
    if not scenarios:
        logger.warning(f"⚠️ No scenarios found in {get_settings().scenario_dir}")
    width = max([len(name) for name in scenarios] + [4])
    for name, description in scenarios.items():
        print(f"{name:<{width}}  {description}")
    return EXIT_OK


COMMANDS = {
    'run': cmd_run,
    'validate': cmd_validate,
    'list': cmd_list,
}


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    validation = get_settings().validate_configuration()
    for warning in validation['warnings']:
        logger.warning(f"⚠️ {warning}")
    if not validation['valid']:
        for error in validation['errors']:
            logger.error(f"❌ {error}")
        return EXIT_CONFIG

    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as e:
        logger.error(f"❌ Configuration error: {str(e)}")
        return EXIT_CONFIG
    except NumericalAbortError as e:
        logger.error(f"❌ Numerical abort at t={e.time:.6g} s: {str(e)}")
        return EXIT_ABORT


if __name__ == '__main__':
    sys.exit(main())
