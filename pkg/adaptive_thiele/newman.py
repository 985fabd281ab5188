'''
This module runs the Newman experiment: rational interpolation of `|x|` on
`[-1, 1]`.

Newman's points cluster geometrically around the kink at `x = 0`:

    (-1, -eta, ..., -eta^(n-1), 0, eta^(n-1), ..., eta, 1),   eta = exp(-1 / sqrt(n))

Interpolants in these `2n + 1` points converge root-exponentially, i.e. like
`exp(-C sqrt(n))`. The classic fixed-order construction cannot even be built on
them, since the left half of the points lies on the line `y = -x`. The adaptive
builder uses all points.

The study records, for each `n`, the maximum error on a grid near `0`, the error
in the interpolation points, and the number of poles in `[-1, 1]`. Interpolants for
odd `n` have poles there; those for even `n` do not.
'''

from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from .convergents import exact_numerator_denominator, numerator_denominator
from .core import (
    DEFAULT_TOL, FitConfig, SampleSet, ThieleModel, eval_cfrac_batch, fit_adaptive
)
from .errors import InvalidInput, InvalidN, ThieleError

logger = logging.getLogger('adaptive-thiele')

POLE_RATIO = 1e6
'''A denominator sign change counts as a pole if `|A_m / B_m|` exceeds this value
inside the bracket.'''

MAX_BISECTIONS = 200


@dataclass(frozen=True)
class NewmanConfig:
    '''
    The size of a Newman point set.

    Parameters:
        n: number of points on each side of `0`.

    Raises:
        InvalidN: if `n` is not an integer of at least 1.
    '''

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidN(self.n)

    @property
    def eta(self) -> float:
        return float(np.exp(-1 / np.sqrt(self.n)))


@dataclass(frozen=True)
class StudyGrid:
    '''
    A uniform grid on which the maximum error is measured.

    The default grid has 10000 points on `[0, 0.01]`, since the error of these
    interpolants peaks near the kink of `|x|`.
    '''

    lo: float = 0.0
    hi: float = 0.01
    count: int = 10000

    def __post_init__(self):
        if self.count < 2:
            raise InvalidInput(f'A grid needs at least 2 points, got {self.count}')
        if not self.lo < self.hi:
            raise InvalidInput(f'Grid bounds must satisfy lo < hi, got {self.lo}:{self.hi}')

    @classmethod
    def full(cls, count: int = 10000) -> 'StudyGrid':
        '''A grid on the whole interval `[-1, 1]`.'''
        return cls(-1.0, 1.0, count)

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class NewmanStudyRow:
    '''
    The outcome of the experiment for one value of `n`.

    Parameters:
        n: the size parameter of the point set
        eta: the ratio of the geometric point spacing
        order: the order of the fitted model; -1 if the fit failed
        sup_err: maximum error on the study grid
        node_err_2norm: 2-norm of the error in all `2n + 1` points
        poles_in_unit_interval: number of pole brackets found in `[-1, 1]`
        stopped_early: whether the builder stopped before using all points
        error: the error message, if the fit for this row failed
    '''

    n: int
    eta: float
    order: int
    sup_err: float
    node_err_2norm: float
    poles_in_unit_interval: int
    stopped_early: bool
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def abs_reference(x: np.ndarray) -> np.ndarray:
    '''The function being approximated, `|x|`.'''
    return np.abs(x)


def newman_points(n: int) -> SampleSet:
    '''
    The `2n + 1` Newman points with values `|x|`, in ascending order.

    The set is exactly symmetric: the right half is the negation of the left half,
    and `0` is included.

    Raises:
        InvalidN: if `n < 1`.
    '''
    config = NewmanConfig(n)
    powers = config.eta ** np.arange(config.n)
    xs = np.concatenate([-powers, [0.0], powers[::-1]])
    return SampleSet(tuple(xs), tuple(np.abs(xs)))


def sup_error_on_grid(model: ThieleModel, f: Callable[[np.ndarray], np.ndarray],
                      lo: float, hi: float, count: int) -> float:
    '''
    The maximum of `|C_m(x) - f(x)|` over a uniform grid.

    Grid points where the error is NaN are left out, with a warning in the log.

    Parameters:
        model: the continued fraction
        f: the reference function; it receives an array of grid points.
        lo: left end of the grid
        hi: right end of the grid
        count: number of grid points, at least 2

    Returns:
        The maximum error; `inf` if the model has a pole on a grid point.
    '''
    grid = StudyGrid(lo, hi, count).points()
    errors = np.abs(eval_cfrac_batch(model, grid) - f(grid))
    missing = np.isnan(errors)
    if missing.any():
        logger.warning('%d of %d grid values are NaN and were excluded',
                       int(missing.sum()), count)
        if missing.all():
            return float('nan')
    return float(np.max(errors[~missing]))


def node_error_norm(model: ThieleModel, data: SampleSet) -> float:
    '''
    The Euclidean norm of `f(x_i) - C_m(x_i)` over all samples of `data`.
    '''
    xs, fs = data.arrays()
    return float(np.linalg.norm(fs - eval_cfrac_batch(model, xs)))


def _bracket_has_pole(model: ThieleModel, left: float, right: float) -> bool:
    '''
    Narrow down a sign change of the denominator by bisection, and check whether the
    value of the fraction blows up inside it.

    The floating point recurrence settles most brackets. Where it does not, the
    bracket is bisected again with exact arithmetic.
    '''
    A, B = numerator_denominator(model, [left, right])
    left_sign = np.sign(B[0])
    start, end = left, right
    with np.errstate(divide='ignore', invalid='ignore'):
        largest = float(np.nanmax(np.abs(A / B)))

        for _ in range(MAX_BISECTIONS):
            if largest > POLE_RATIO:
                return True
            middle = 0.5 * (left + right)
            if not left < middle < right:
                break
            (a,), (b,) = numerator_denominator(model, [middle])
            if b == 0:
                # rounding can cancel B completely
                break
            largest = max(largest, float(abs(a / b)))
            if np.sign(b) == left_sign:
                left = middle
            else:
                right = middle

    return largest > POLE_RATIO or _exact_bracket_has_pole(model, start, end)


def _exact_bracket_has_pole(model: ThieleModel, left: float, right: float) -> bool:
    '''
    Bisect a bracket with the exact recurrence, over the doubles it contains.

    A pole is found where `B_m` vanishes and `A_m` does not, or where `|A_m / B_m|`
    exceeds `POLE_RATIO`.
    '''
    a, b = exact_numerator_denominator(model, left)
    if b == 0:
        return a != 0
    left_sign = b > 0
    a, b = exact_numerator_denominator(model, right)
    if b == 0:
        return a != 0
    if (b > 0) == left_sign:
        logger.debug('no exact sign change in [%r, %r]', left, right)
        return False

    for _ in range(MAX_BISECTIONS):
        middle = 0.5 * (left + right)
        if not left < middle < right:
            break
        a, b = exact_numerator_denominator(model, middle)
        if b == 0:
            return a != 0
        if abs(a) > Fraction(POLE_RATIO) * abs(b):
            return True
        if (b > 0) == left_sign:
            left = middle
        else:
            right = middle
    return False


def pole_scan(model: ThieleModel, lo: float, hi: float, samples: int) -> List[Tuple[float, float]]:
    '''
    Find intervals that contain a pole of the continued fraction.

    The denominator `B_m` is evaluated on a uniform grid with a scaled recurrence,
    which preserves its sign. Each pair of neighbouring grid points where the sign
    changes is a candidate; samples where `B_m` is zero are skipped, so a pole on a
    grid point ends up inside the bracket around it. A candidate is reported only if
    `|A_m / B_m|` exceeds `1e6` somewhere in the bracket, or `B_m` vanishes there
    while `A_m` does not. Sign changes that the numerator shares (a removable common
    factor) are dropped. Brackets where the floating point denominator is lost in
    rounding are decided with `exact_numerator_denominator`.

    Parameters:
        model: the continued fraction
        lo: left end of the scan
        hi: right end of the scan
        samples: number of grid points, at least 2

    Returns:
        The brackets `(left, right)` in ascending order.
    '''
    grid = StudyGrid(lo, hi, samples).points()
    if model.order == 0:
        return []

    _, B = numerator_denominator(model, grid)
    usable = np.flatnonzero(np.isfinite(B) & (B != 0))
    signs = np.sign(B[usable])
    candidates = np.flatnonzero(signs[:-1] != signs[1:])

    brackets = []
    for c in candidates:
        left, right = float(grid[usable[c]]), float(grid[usable[c + 1]])
        if _bracket_has_pole(model, left, right):
            brackets.append((left, right))
        else:
            logger.debug('sign change in [%r, %r] is removable', left, right)
    return brackets


def study_row(n: int, grid: StudyGrid = StudyGrid(), tol: float = DEFAULT_TOL,
              pole_lo: float = -1.0, pole_hi: float = 1.0,
              pole_samples: int = 20001) -> NewmanStudyRow:
    '''
    Run the experiment for a single `n`. See `run_newman_study`.
    '''
    config = NewmanConfig(n)
    try:
        data = newman_points(n)
        model, report = fit_adaptive(data, FitConfig(tol=tol))
    except ThieleError as e:
        logger.warning('n=%d: fit failed: %s', n, e)
        return NewmanStudyRow(
            n=n, eta=config.eta, order=-1, sup_err=float('nan'),
            node_err_2norm=float('nan'), poles_in_unit_interval=0,
            stopped_early=False, error=str(e),
        )

    row = NewmanStudyRow(
        n=n,
        eta=config.eta,
        order=model.order,
        sup_err=sup_error_on_grid(model, abs_reference, grid.lo, grid.hi, grid.count),
        node_err_2norm=node_error_norm(model, data),
        poles_in_unit_interval=len(pole_scan(model, pole_lo, pole_hi, pole_samples)),
        stopped_early=report.stopped_early,
    )
    logger.info('n=%d: order %d, sup error %.3e, node error %.3e, %d poles',
                n, row.order, row.sup_err, row.node_err_2norm, row.poles_in_unit_interval)
    return row


def run_newman_study(n_min: int, n_max: int, grid: StudyGrid = StudyGrid(),
                     tol: float = DEFAULT_TOL, pole_lo: float = -1.0,
                     pole_hi: float = 1.0, pole_samples: int = 20001,
                     ns: Optional[Iterable[int]] = None) -> List[NewmanStudyRow]:
    '''
    Fit Newman interpolants for a range of `n` and collect their accuracy.

    For each `n` this builds the point set, fits it adaptively, and records the order,
    the maximum error on `grid`, the 2-norm of the error in the points, and the
    number of poles in `[pole_lo, pole_hi]`. A failing fit does not abort the study:
    its row is flagged with the error message.

    Parameters:
        n_min: smallest `n`, at least 1
        n_max: largest `n`
        grid: the grid for the maximum error
        tol: stopping tolerance of the builder
        pole_lo: left end of the pole scan
        pole_hi: right end of the pole scan
        pole_samples: number of grid points of the pole scan
        ns: optional explicit selection of `n` values within the range

    Returns:
        One row per `n`, in ascending order of `n`.
    '''
    if n_min < 1:
        raise InvalidN(n_min)
    if n_max < n_min:
        raise InvalidInput(f'n_max ({n_max}) must not be smaller than n_min ({n_min})')

    values = range(n_min, n_max + 1) if ns is None else sorted(
        n for n in set(ns) if n_min <= n <= n_max
    )
    return [
        study_row(n, grid, tol, pole_lo, pole_hi, pole_samples)
        for n in values
    ]


def convergence_slope(rows: Iterable[NewmanStudyRow], even_only: bool = True) -> float:
    '''
    The least-squares slope of `log10(sup_err)` against `sqrt(n)`.

    Root-exponential convergence shows as a negative slope. Odd `n` are left out by
    default, since their poles near `0` distort the grid error.

    Returns:
        The slope, or NaN if fewer than two usable rows remain.
    '''
    usable = [
        row for row in rows
        if not row.failed and np.isfinite(row.sup_err) and row.sup_err > 0
        and (row.n % 2 == 0 or not even_only)
    ]
    if len(usable) < 2:
        return float('nan')
    x = np.sqrt([row.n for row in usable])
    y = np.log10([row.sup_err for row in usable])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
