#!/usr/bin/env python3
"""
ESCS command-line interface.

Usage:
    escs run --config scenario.conf --out results --emit all
    escs case --v0 20 --occupants 2 --pedestrians 2
    escs fit --samples force_deformation.csv
    escs crash-check --mass 1247 --v0 15.6464

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from . import __version__
from .crash import CrashModel, compare_with_reference, lls_fit, load_samples
from .errors import ConfigError
from .published import FE_REFERENCE
from .report import EMIT_CHOICES, emit_report, format_rows_csv
from .scenario import PolicySelection, ScenarioConfig, load_config, run_case, sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _config(path: Optional[str]) -> ScenarioConfig:
    return load_config(path) if path else ScenarioConfig()


def _cmd_run(args: argparse.Namespace) -> int:
    config = _config(args.config)
    if args.policy:
        config = config.with_policy(args.policy)

    report = sweep(config, workers=args.workers)
    emit_report(report, args.out, args.emit)

    print(f"{'occupants':>9}  {'policy':<14} {'summed cost':>12} {'published':>10}")
    for occupants in sorted(report.summaries):
        for policy in report.policies:
            published = report.published_summaries.get(occupants, {}).get(policy.value)
            published_text = f"{published:10.0f}" if published is not None else f"{'-':>10}"
            print(f"{occupants:>9}  {policy.value:<14} "
                  f"{report.summaries[occupants][policy.value]:12.4f} {published_text}")
    for line in report.annotations:
        print(f"note: {line}")
    print(f"Results saved to {args.out}")
    return EXIT_OK


def _cmd_case(args: argparse.Namespace) -> int:
    config = _config(args.config)
    row = run_case(config, args.v0, args.occupants, args.pedestrians)
    sys.stdout.write(format_rows_csv([row]))
    return EXIT_OK


def _cmd_fit(args: argparse.Namespace) -> int:
    fit = lls_fit(load_samples(args.samples))
    print(f"failure point fp: {fit.failure_point_fp:.6g} N")
    print(f"stiffness k:      {fit.stiffness_k:.6g} N/m")
    print(f"fitted energy:    {fit.fitted_energy:.6g} J")
    return EXIT_OK


def _cmd_crash_check(args: argparse.Namespace) -> int:
    config = _config(args.config)
    model = CrashModel(
        mass=args.mass,
        stiffness_k=config.crash.stiffness,
        failure_point_fp=config.crash.failure_point,
    )
    print(f"{'quantity':<38} {'reference':>12} {'model':>12} {'discrepancy':>12}")
    for row in compare_with_reference(model, args.v0):
        print(f"{row.quantity:<38} {row.reference:12.6g} {row.model:12.6g} "
              f"{row.discrepancy:12.4f}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the validation code"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog='escs',
        description="Ethical steering control system: collision outcome sweep"
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument(
        '--verbose', '-v',
        action='store_true',
        help="Enable debug logging"
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    run = subparsers.add_parser('run', help="Sweep every configured case and write reports")
    run.add_argument('--config', '-c', help="Configuration file (default: built-in values)")
    run.add_argument(
        '--policy',
        choices=[p.value for p in PolicySelection],
        help="Policies to report (default: scenario.policy)"
    )
    run.add_argument('--out', '-o', default='results', help="Output directory (default: results)")
    run.add_argument(
        '--emit',
        choices=EMIT_CHOICES,
        default='all',
        help="Files to write (default: all)"
    )
    run.add_argument('--workers', '-w', type=int, help="Worker processes (default: simulation.workers)")
    run.set_defaults(handler=_cmd_run)

    case = subparsers.add_parser('case', help="Run one case and print its CSV row")
    case.add_argument('--config', '-c', help="Configuration file (default: built-in values)")
    case.add_argument('--v0', type=float, required=True, help="Initial velocity in m/s")
    case.add_argument('--occupants', type=int, required=True, help="Vehicle occupants")
    case.add_argument('--pedestrians', type=int, required=True, help="Pedestrians on the alternative path")
    case.set_defaults(handler=_cmd_case)

    fit = subparsers.add_parser('fit', help="Least-squares fit of a force/deformation CSV")
    fit.add_argument('--samples', '-s', required=True, help="CSV with deformation_m,force_N columns")
    fit.set_defaults(handler=_cmd_fit)

    check = subparsers.add_parser('crash-check',
                                  help="Compare the crash model with the finite-element reference")
    check.add_argument('--config', '-c', help="Configuration file (crash section is used)")
    check.add_argument(
        '--mass',
        type=float,
        default=FE_REFERENCE.mass,
        help=f"Vehicle mass in kg (default: {FE_REFERENCE.mass:g})"
    )
    check.add_argument(
        '--v0',
        type=float,
        default=FE_REFERENCE.impact_velocity,
        help=f"Impact velocity in m/s (default: {FE_REFERENCE.impact_velocity:g})"
    )
    check.set_defaults(handler=_cmd_crash_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Command-line entry point, returns the process exit code"""
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    logger.debug(f"escs {__version__}: {args.command}")
    try:
        return args.handler(args)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == '__main__':
    sys.exit(main())
