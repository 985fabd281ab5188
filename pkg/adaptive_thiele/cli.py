'''
This module defines the `thiele` command-line interface.

Subcommands:

- `fit`: fit a model to samples from a CSV file and save it as JSON. With
    `--fixed-order`, the points are taken in file order, which can break down.
- `eval`: evaluate a saved model on a uniform grid and write `x,Cx` as CSV.
- `newman`: run the Newman study for a range of `n` and write the report as CSV.
- `demo-breakdown`: show the fixed-order breakdown on a Newman point set.

Exit codes are 0 on success, 1 for data or runtime errors and 2 for usage errors.
The default tolerance can be set with the `THIELE_TOL` environment variable; the
`--tol` flag takes precedence.
'''

import argparse
from dataclasses import dataclass
import logging
import os
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .core import DEFAULT_TOL, FitConfig, eval_cfrac_batch, fit_adaptive, fit_fixed_order
from .errors import BreakdownError, InvalidInput, ThieleError
from .export import write_grid_csv, write_model, write_study_csv
from .newman import StudyGrid, convergence_slope, newman_points, run_newman_study
from .readers.csv import read_samples
from .readers.json import read_model

logger = logging.getLogger('adaptive-thiele')

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

TOL_VARIABLE = 'THIELE_TOL'


@dataclass(frozen=True)
class CliConfig:
    '''
    The parsed command line.
    '''

    command: str
    tol: float = DEFAULT_TOL
    input: Optional[str] = None
    output: Optional[str] = None
    model: Optional[str] = None
    report: Optional[str] = None
    grid: Optional[StudyGrid] = None
    fixed_order: bool = False
    max_order: Optional[int] = None
    n: int = 5
    n_min: int = 5
    n_max: int = 50
    full_grid: bool = False
    max_failures: int = 0
    verbose: bool = False


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'not a number: {text!r}')
    if not (value > 0 and np.isfinite(value)):
        raise argparse.ArgumentTypeError(f'must be positive: {text!r}')
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'not an integer: {text!r}')
    if value < 1:
        raise argparse.ArgumentTypeError(f'must be at least 1: {text!r}')
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'not an integer: {text!r}')
    if value < 0:
        raise argparse.ArgumentTypeError(f'must not be negative: {text!r}')
    return value


def parse_grid(text: str) -> StudyGrid:
    '''
    Parse a grid specification `lo:hi:count`, e.g. `0:2:5`.

    A negative lower bound must be attached to the flag, as in `--grid=-1:1:3`.
    '''
    parts = text.split(':')
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f'expected lo:hi:count, got {text!r}')
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        return StudyGrid(lo, hi, count)
    except (ValueError, InvalidInput) as e:
        raise argparse.ArgumentTypeError(f'invalid grid {text!r}: {e}')


def _default_tol(parser: argparse.ArgumentParser) -> float:
    value = os.environ.get(TOL_VARIABLE)
    if not value:
        return DEFAULT_TOL
    try:
        return _positive_float(value)
    except argparse.ArgumentTypeError as e:
        parser.error(f'invalid {TOL_VARIABLE}: {e}')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='thiele',
        description='Adaptive Thiele continued fraction interpolation.',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='store_true', help='Log debug output.')
    commands = parser.add_subparsers(dest='command', required=True)

    fit = commands.add_parser('fit', help='Fit a model to CSV samples.')
    fit.add_argument('--input', required=True, help='CSV file with columns x,f.')
    fit.add_argument('--output', required=True, help='Path of the model JSON.')
    fit.add_argument('--tol', type=_positive_float, default=None,
                     help=f'Stopping tolerance (default: ${TOL_VARIABLE} or {DEFAULT_TOL:g}).')
    fit.add_argument('--max-order', type=_non_negative_int, default=None, dest='max_order',
                     help='Upper bound on the order of the model.')
    fit.add_argument('--fixed-order', action='store_true', dest='fixed_order',
                     help='Take the points in file order (may break down).')

    evaluate = commands.add_parser('eval', help='Evaluate a model on a grid.')
    evaluate.add_argument('--model', required=True, help='Model JSON file.')
    evaluate.add_argument('--grid', required=True, type=parse_grid,
                          help='Grid as lo:hi:count.')
    evaluate.add_argument('--output', default=None,
                          help='CSV file for x,Cx (default: standard output).')

    newman = commands.add_parser('newman', help='Run the Newman study.')
    newman.add_argument('--n-min', type=_positive_int, default=5, dest='n_min')
    newman.add_argument('--n-max', type=_positive_int, default=50, dest='n_max')
    newman.add_argument('--report', default=None,
                        help='CSV file for the study rows (default: standard output).')
    newman.add_argument('--tol', type=_positive_float, default=None)
    newman.add_argument('--grid', type=parse_grid, default=None,
                        help='Grid for the maximum error (default: 0:0.01:10000).')
    newman.add_argument('--full-grid', action='store_true', dest='full_grid',
                        help='Measure the maximum error on [-1, 1].')
    newman.add_argument('--max-failures', type=_non_negative_int, default=0,
                        dest='max_failures',
                        help='Number of failed rows tolerated before exiting with 1.')

    demo = commands.add_parser('demo-breakdown',
                               help='Show the fixed-order breakdown on Newman points.')
    demo.add_argument('--n', type=_positive_int, default=5)

    return parser


def parse_args(argv: Optional[List[str]] = None) -> CliConfig:
    '''
    Parse the command line.

    Raises:
        SystemExit: with code 2 on usage errors, as `argparse` does.
    '''
    parser = build_parser()
    args = parser.parse_args(argv)
    tol = getattr(args, 'tol', None)
    if tol is None:
        tol = _default_tol(parser)

    if args.command == 'newman' and args.n_max < args.n_min:
        parser.error('--n-max must not be smaller than --n-min')

    options = {
        key: value for key, value in vars(args).items()
        if key in CliConfig.__dataclass_fields__ and value is not None
    }
    options['tol'] = tol
    return CliConfig(**options)


def cmd_fit(config: CliConfig) -> int:
    data = read_samples(config.input)
    xs, fs = data.arrays()

    if config.fixed_order:
        try:
            model = fit_fixed_order(data)
        except BreakdownError as e:
            print(f'Error, (in fit --fixed-order) {e}', file=sys.stderr)
            return EXIT_ERROR
        write_model(model, None, config.output)
        stopped_early = False
    else:
        fit_config = FitConfig(tol=config.tol, max_order=config.max_order)
        model, report = fit_adaptive(data, fit_config)
        write_model(model, fit_config, config.output, report)
        stopped_early = report.stopped_early
        for note in report.diagnostics:
            print(f'note: {note}', file=sys.stderr)

    max_error = float(np.max(np.abs(eval_cfrac_batch(model, xs) - fs)))
    print(
        f'order={model.order} max_node_error={max_error:.3e} '
        f'stopped_early={str(stopped_early).lower()}'
    )
    return EXIT_OK


def cmd_eval(config: CliConfig) -> int:
    model = read_model(config.model)
    xs = config.grid.points()
    write_grid_csv(xs, eval_cfrac_batch(model, xs), config.output or sys.stdout)
    return EXIT_OK


def cmd_newman(config: CliConfig) -> int:
    if config.full_grid:
        grid = StudyGrid.full()
    else:
        grid = config.grid or StudyGrid()

    rows = run_newman_study(config.n_min, config.n_max, grid=grid, tol=config.tol)
    write_study_csv(rows, config.report or sys.stdout)

    failures = sum(row.failed for row in rows)
    slope = convergence_slope(rows)
    summary = sys.stdout if config.report else sys.stderr
    print(
        f'rows={len(rows)} failed={failures} '
        f'slope_log10_err_vs_sqrt_n_even={slope:.6g}',
        file=summary,
    )
    if failures > config.max_failures:
        print(f'error: {failures} rows failed', file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def cmd_demo_breakdown(config: CliConfig) -> int:
    data = newman_points(config.n)
    try:
        fit_fixed_order(data)
    except BreakdownError as e:
        print(f'Error, (in fit --fixed-order) {e}', file=sys.stderr)
        model, report = fit_adaptive(data, FitConfig(tol=config.tol))
        print(f'adaptive fit: order={model.order} of {len(data) - 1} '
              f'max_node_error={report.max_node_error:.3e}')
        return EXIT_ERROR
    print(f'no breakdown for n={config.n}')
    return EXIT_OK


COMMANDS = {
    'fit': cmd_fit,
    'eval': cmd_eval,
    'newman': cmd_newman,
    'demo-breakdown': cmd_demo_breakdown,
}


def main(argv: Optional[List[str]] = None) -> int:
    '''
    Run the command line and return the exit code.
    '''
    try:
        config = parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(level=logging.WARNING)
    if config.verbose:
        logger.setLevel(logging.DEBUG)

    try:
        return COMMANDS[config.command](config)
    except (ThieleError, OSError) as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_ERROR


def run():
    sys.exit(main())


if __name__ == '__main__':
    run()
