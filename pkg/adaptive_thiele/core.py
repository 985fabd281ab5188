'''
This module defines the core types of the package and the continued fraction
builders.

A Thiele continued fraction has the form

    C_m(x) = a_0 + (x - z_0) / (a_1 + (x - z_1) / (a_2 + ... + (x - z_{m-1}) / a_m))

where the coefficients `a_i` are inverse differences of the interpolation data.
The module provides two builders:

- `fit_adaptive`, which picks the next node where the current convergent has the
    largest error. This ordering keeps every coefficient finite.
- `fit_fixed_order`, which takes the nodes in the order they are given. This is the
    classic construction, and it breaks down whenever the recursion divides by zero.

All arithmetic follows IEEE-754 semantics: divisions by zero produce infinities
instead of exceptions.
'''

from dataclasses import dataclass
import logging
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

from .errors import BreakdownError, DuplicateAbscissa, InvalidInput, NonFiniteValue

logger = logging.getLogger('adaptive-thiele')

DEFAULT_TOL = 5e-15
'''Default relative tolerance of the stopping criterion.'''


@dataclass(frozen=True)
class SampleSet:
    '''
    Interpolation data: distinct abscissae with finite function values.

    Parameters:
        xs: the abscissae. They must be pairwise distinct; no tolerance is applied.
        fs: the function values, one per abscissa. They must be finite.

    Raises:
        InvalidInput: if the data is empty, or `xs` and `fs` differ in length.
        DuplicateAbscissa: if an abscissa occurs twice.
        NonFiniteValue: if a value or abscissa is infinite or NaN.
    '''

    xs: Tuple[float, ...]
    fs: Tuple[float, ...]

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        fs = tuple(float(f) for f in self.fs)
        if len(xs) != len(fs):
            raise InvalidInput(
                f'Got {len(xs)} abscissae but {len(fs)} function values'
            )
        if not xs:
            raise InvalidInput('Interpolation data is empty')

        for index, (x, f) in enumerate(zip(xs, fs)):
            if not np.isfinite(x):
                raise NonFiniteValue(index=index, value=x)
            if not np.isfinite(f):
                raise NonFiniteValue(index=index, value=f)

        seen = set()
        for x in xs:
            if x in seen:
                raise DuplicateAbscissa(x)
            seen.add(x)

        object.__setattr__(self, 'xs', xs)
        object.__setattr__(self, 'fs', fs)

    def __len__(self) -> int:
        return len(self.xs)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        '''
        The abscissae and values as two float64 arrays.
        '''
        return np.array(self.xs, dtype=float), np.array(self.fs, dtype=float)

    def value_at(self, x: float) -> float:
        '''
        The function value at an abscissa of the data.

        Raises:
            KeyError: if `x` is not one of the abscissae.
        '''
        return dict(zip(self.xs, self.fs))[float(x)]


@dataclass(frozen=True)
class ThieleModel:
    '''
    A Thiele continued fraction of order `m`.

    Parameters:
        nodes: the nodes `z_0, ..., z_m` in the order in which they were selected.
            The last node does not enter the evaluation, but it is kept so the model
            records every point it interpolates.
        coeffs: the coefficients `a_0, ..., a_m`, i.e. the inverse differences
            `phi_i[z_0, ..., z_i]`.

    Raises:
        InvalidInput: if the model violates one of its invariants: nodes and
            coefficients must have the same non-zero length, nodes must be distinct,
            coefficients finite, and the last coefficient must not be zero for
            `m >= 1`.
    '''

    nodes: Tuple[float, ...]
    coeffs: Tuple[float, ...]

    def __post_init__(self):
        nodes = tuple(float(z) for z in self.nodes)
        coeffs = tuple(float(a) for a in self.coeffs)
        if len(nodes) != len(coeffs):
            raise InvalidInput(
                f'Model has {len(nodes)} nodes but {len(coeffs)} coefficients'
            )
        if not coeffs:
            raise InvalidInput('Model has no coefficients')
        if len(set(nodes)) != len(nodes):
            raise InvalidInput('Model nodes are not distinct')
        if not all(np.isfinite(nodes)):
            raise InvalidInput('Model nodes must be finite')
        if not all(np.isfinite(coeffs)):
            raise InvalidInput('Model coefficients must be finite')
        if len(coeffs) > 1 and coeffs[-1] == 0:
            raise InvalidInput('The last coefficient of a model must not be zero')

        object.__setattr__(self, 'nodes', nodes)
        object.__setattr__(self, 'coeffs', coeffs)

    @property
    def order(self) -> int:
        '''The order `m` of the continued fraction.'''
        return len(self.coeffs) - 1

    def __call__(self, x: Union[float, Iterable[float]]):
        if np.ndim(x) == 0:
            return eval_cfrac(self, x)
        return eval_cfrac_batch(self, x)

    def to_rational(self) -> Tuple[Polynomial, Polynomial]:
        '''
        Convert the continued fraction to a quotient of two polynomials.

        The conversion runs the fraction backwards, starting from the tail `a_m`.
        Numerator and denominator share no normalisation; only their quotient is
        meaningful. The polynomial coefficients can be badly conditioned for large
        orders, so evaluation should go through `eval_cfrac`.

        Returns:
            A tuple `(numerator, denominator)` of `numpy.polynomial.Polynomial`.
        '''
        numerator = Polynomial([self.coeffs[-1]])
        denominator = Polynomial([1.0])

        for i in range(self.order - 1, -1, -1):
            numerator, denominator = (
                numerator * self.coeffs[i] + denominator * Polynomial([-self.nodes[i], 1.0]),
                numerator,
            )
        return numerator, denominator


@dataclass(frozen=True)
class ResidualState:
    '''
    The builder's view of the points that have not been selected yet.

    `rr` holds, for each remaining point `x`, the inverse difference
    `phi_{k-1}[z_0, ..., z_{k-2}, x]` of the current level. Entries may be infinite.
    '''

    rr: np.ndarray
    remaining_xs: np.ndarray
    remaining_fs: np.ndarray

    @classmethod
    def initial(cls, data: SampleSet) -> 'ResidualState':
        xs, fs = data.arrays()
        return cls(rr=fs.copy(), remaining_xs=xs, remaining_fs=fs)

    def __len__(self) -> int:
        return len(self.remaining_xs)

    def advanced(self, node: float, coeff: float) -> 'ResidualState':
        '''
        Move every candidate one level up the recursion, after `node` was
        accepted with coefficient `coeff`.
        '''
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            rr = (self.remaining_xs - node) / (self.rr - coeff)
        return ResidualState(rr, self.remaining_xs, self.remaining_fs)

    def without(self, index: int) -> 'ResidualState':
        '''
        Drop the candidate at `index`. The relative order of the others is kept.
        '''
        return ResidualState(
            np.delete(self.rr, index),
            np.delete(self.remaining_xs, index),
            np.delete(self.remaining_fs, index),
        )


@dataclass(frozen=True)
class FitConfig:
    '''
    Settings for `fit_adaptive`.

    Parameters:
        tol: relative tolerance of the stopping criterion. The build stops once the
            largest error over the remaining points falls below `tol` times the
            largest remaining `|f|`.
        max_order: optional cap on the order of the model.
    '''

    tol: float = DEFAULT_TOL
    max_order: Optional[int] = None

    def __post_init__(self):
        if not (self.tol > 0 and np.isfinite(self.tol)):
            raise InvalidInput(f'Tolerance must be positive and finite, got {self.tol!r}')
        if self.max_order is not None and self.max_order < 0:
            raise InvalidInput(f'max_order must be non-negative, got {self.max_order!r}')


@dataclass(frozen=True)
class FitReport:
    '''
    Diagnostics of an adaptive build.

    Parameters:
        steps_taken: number of selected nodes, including the first one.
        stopped_early: whether the stopping criterion fired before all points were
            used.
        node_errors: `|C_m(x_i) - f_i|` for every sample, in the order of the data.
        diagnostics: notes about candidates that were passed over, or about why the
            build ended.
        selection_errors: the error of the previous convergent at each node that was
            accepted after the first.
        stop_error: the largest remaining error when the stopping criterion fired.
        stop_threshold: the threshold it was compared against.
    '''

    steps_taken: int
    stopped_early: bool
    node_errors: Tuple[float, ...]
    diagnostics: Tuple[str, ...] = ()
    selection_errors: Tuple[float, ...] = ()
    stop_error: Optional[float] = None
    stop_threshold: Optional[float] = None

    @property
    def max_node_error(self) -> float:
        '''The largest node error. A NaN error counts as infinite.'''
        errors = np.asarray(self.node_errors)
        if np.isnan(errors).any():
            return float('inf')
        return float(np.max(errors))


def _evaluate(nodes: np.ndarray, coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    '''
    Backward evaluation of the continued fraction given by `nodes` and `coeffs`.

    This does not require a valid `ThieleModel`, so the builders can evaluate
    partial fractions.
    '''
    result = np.zeros_like(x)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        for i in range(len(coeffs) - 1, 0, -1):
            result = (x - nodes[i - 1]) / (coeffs[i] + result)
        return coeffs[0] + result


def eval_cfrac(model: ThieleModel, x: float) -> float:
    '''
    Evaluate a continued fraction at a single point.

    Evaluation runs the fraction backwards. Divisions by zero are not trapped: the
    result is `inf` at a pole, and can be NaN when `x` coincides with a node while an
    inner tail sums to zero. The value there is then only defined as a limit, and
    the limit need not match the sample at that node.

    Parameters:
        model: the continued fraction
        x: the point to evaluate

    Returns:
        The value of the continued fraction at `x`.
    '''
    return float(eval_cfrac_batch(model, [x])[0])


def eval_cfrac_batch(model: ThieleModel, xs: Iterable[float]) -> np.ndarray:
    '''
    Evaluate a continued fraction at several points.

    Parameters:
        model: the continued fraction
        xs: the points to evaluate

    Returns:
        A float64 array with the value at each point, in the same order.
    '''
    x = np.asarray(list(xs) if not isinstance(xs, np.ndarray) else xs, dtype=float)
    return _evaluate(np.asarray(model.nodes), np.asarray(model.coeffs), x)


def select_first_point(data: SampleSet) -> int:
    '''
    Choose the first node of an adaptive build: the sample with the smallest
    `|f|`. A zero of the data is then represented exactly.

    Ties go to the lowest index.
    '''
    _, fs = data.arrays()
    return int(np.argmin(np.abs(fs)))


def _stopping_threshold(fs: np.ndarray, tol: float) -> float:
    scale = float(np.max(np.abs(fs)))
    if scale == 0:
        return tol
    return tol * scale


def _errors(nodes: List[float], coeffs: List[float], xs: np.ndarray,
            fs: np.ndarray) -> np.ndarray:
    errors = np.abs(_evaluate(np.array(nodes), np.array(coeffs), xs) - fs)
    # a NaN value means the convergent does not reproduce f there
    errors[np.isnan(errors)] = np.inf
    return errors


def _is_final_term(j: int, state: ResidualState, nodes: List[float],
                   coeffs: List[float], limit: int, tol: float) -> bool:
    '''
    Whether accepting candidate `j` would end the build: no points left, the order
    cap is reached, or the stopping criterion would fire right after.
    '''
    if len(state) == 1 or len(coeffs) == limit:
        return True
    rest = state.without(j)
    trial_errors = _errors(
        nodes + [float(state.remaining_xs[j])],
        coeffs + [float(state.rr[j])],
        rest.remaining_xs,
        rest.remaining_fs,
    )
    return bool(np.max(trial_errors) < _stopping_threshold(rest.remaining_fs, tol))


def _select_candidate(errors: np.ndarray, threshold: float, state: ResidualState,
                      nodes: List[float], coeffs: List[float], limit: int, tol: float,
                      diagnostics: List[str]) -> Optional[int]:
    '''
    Pick the remaining point with the largest error whose inverse difference can be
    used as the next coefficient.
    '''
    # stable sort on the negated errors: ties keep the lowest index
    for j in np.argsort(-errors, kind='stable'):
        if not errors[j] >= threshold:
            break
        x, candidate = float(state.remaining_xs[j]), float(state.rr[j])
        if not np.isfinite(candidate):
            message = f'skipped x={x!r}: non-finite inverse difference {candidate!r}'
            logger.warning(message)
            diagnostics.append(message)
            continue
        if candidate == 0 and _is_final_term(j, state, nodes, coeffs, limit, tol):
            message = f'skipped x={x!r}: zero inverse difference as last coefficient'
            logger.warning(message)
            diagnostics.append(message)
            continue
        return int(j)
    return None


def fit_adaptive(data: SampleSet, cfg: FitConfig = FitConfig()) -> Tuple[ThieleModel, FitReport]:
    '''
    Build a Thiele continued fraction, choosing the nodes greedily.

    The first node is the sample with the smallest `|f|`. Each following node is the
    remaining sample where the current convergent has the largest error. Because the
    convergent never interpolates the selected point already, every coefficient of
    the result is finite.

    The build stops when all points are used, when `cfg.max_order` is reached, or
    when the largest error over the remaining points is below `cfg.tol` times the
    largest remaining `|f|` (or below `cfg.tol` itself if all remaining values are
    zero).

    If rounding makes the best candidate's inverse difference non-finite, or zero
    while it would be the last coefficient, the next best candidate is used. If no
    candidate is usable the build stops; the reason is recorded in the report.

    Parameters:
        data: the interpolation data
        cfg: tolerance and order cap

    Returns:
        The model and a report with diagnostics.
    '''
    xs, fs = data.arrays()
    limit = len(data) - 1
    if cfg.max_order is not None:
        limit = min(limit, cfg.max_order)

    first = select_first_point(data)
    nodes = [float(xs[first])]
    coeffs = [float(fs[first])]
    state = ResidualState.initial(data).without(first)
    logger.debug('first node x=%r, f=%r', nodes[0], coeffs[0])

    diagnostics: List[str] = []
    selection_errors: List[float] = []
    stopped_early = False
    stop_error = stop_threshold = None

    while len(state) and len(coeffs) - 1 < limit:
        errors = _errors(nodes, coeffs, state.remaining_xs, state.remaining_fs)
        threshold = _stopping_threshold(state.remaining_fs, cfg.tol)
        worst = float(np.max(errors))
        if worst < threshold:
            stopped_early = True
            stop_error, stop_threshold = worst, threshold
            logger.debug('stopping at order %d: max error %r < %r',
                         len(coeffs) - 1, worst, threshold)
            break

        state = state.advanced(nodes[-1], coeffs[-1])
        j = _select_candidate(
            errors, threshold, state, nodes, coeffs, limit, cfg.tol, diagnostics
        )
        if j is None:
            message = f'no usable candidate at step {len(coeffs)}; stopped at order {len(coeffs) - 1}'
            logger.warning(message)
            diagnostics.append(message)
            break

        selection_errors.append(float(errors[j]))
        nodes.append(float(state.remaining_xs[j]))
        coeffs.append(float(state.rr[j]))
        logger.debug('step %d: x=%r, error %r, coefficient %r',
                     len(coeffs) - 1, nodes[-1], errors[j], coeffs[-1])
        state = state.without(j)

    # a zero accepted as an inner term can end up last if no candidate follows it
    while len(coeffs) > 1 and coeffs[-1] == 0:
        message = f'dropped zero last coefficient at x={nodes[-1]!r}'
        logger.warning(message)
        diagnostics.append(message)
        nodes.pop()
        coeffs.pop()
        selection_errors.pop()

    model = ThieleModel(tuple(nodes), tuple(coeffs))
    node_errors = np.abs(eval_cfrac_batch(model, xs) - fs)
    report = FitReport(
        steps_taken=len(nodes),
        stopped_early=stopped_early,
        node_errors=tuple(float(e) for e in node_errors),
        diagnostics=tuple(diagnostics),
        selection_errors=tuple(selection_errors),
        stop_error=stop_error,
        stop_threshold=stop_threshold,
    )
    logger.info('adaptive fit: order %d from %d points%s', model.order, len(data),
                ' (stopped early)' if stopped_early else '')
    return model, report


def fit_fixed_order(data: SampleSet, strict: bool = True) -> ThieleModel:
    '''
    Build a Thiele continued fraction taking the points in the order given.

    This is the classic construction from the inverse-difference table. It fails
    whenever the recursion meets a zero denominator, which depends on the order of
    the points rather than on whether an interpolant exists.

    Parameters:
        data: the interpolation data, in the order the points should be used.
        strict: if `True`, any zero denominator in the table is a breakdown, as in
            an exact-arithmetic implementation. If `False`, off-diagonal entries may
            become infinite and only a non-finite coefficient is a breakdown.

    Returns:
        The continued fraction through all points.

    Raises:
        BreakdownError: if the recursion breaks down. The error records the level
            of the recursion, and the message states that a denominator of zero was
            produced.
    '''
    xs, fs = data.arrays()
    rr = fs.copy()
    coeffs = [float(fs[0])]

    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        for i in range(1, len(xs)):
            denominators = rr[i:] - rr[i - 1]
            zeros = np.flatnonzero(denominators == 0)
            if zeros.size and (strict or zeros[0] == 0):
                raise BreakdownError(i, int(i + zeros[0]))

            rr[i:] = (xs[i:] - xs[i - 1]) / denominators
            if not np.isfinite(rr[i]):
                raise BreakdownError(i, i, f'non-finite inverse difference {rr[i]!r}')
            if strict and not np.all(np.isfinite(rr[i:])):
                bad = int(i + np.flatnonzero(~np.isfinite(rr[i:]))[0])
                raise BreakdownError(i, bad, 'non-finite inverse difference')
            coeffs.append(float(rr[i]))

    if len(coeffs) > 1 and coeffs[-1] == 0:
        raise BreakdownError(len(coeffs) - 1, len(coeffs) - 1,
                             'the last inverse difference is zero')

    return ThieleModel(tuple(float(x) for x in xs), tuple(coeffs))
