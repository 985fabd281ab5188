'''
This module evaluates the convergents of a continued fraction pointwise.

The `i`-th convergent `C_i = A_i / B_i` keeps the first `i + 1` terms of the
fraction. Numerators and denominators follow the three-term recurrence

    A_i = a_i A_{i-1} + (x - z_{i-1}) A_{i-2}
    B_i = a_i B_{i-1} + (x - z_{i-1}) B_{i-2}

from the seeds `(A_{-2}, B_{-2}) = (0, 1)`, `(A_{-1}, B_{-1}) = (1, 0)` and
`(A_0, B_0) = (a_0, 1)`.

The values grow roughly like a product of the `(x - z_k)`, so long fractions
overflow. A scaled trace divides the current and the previous pair by a common
positive factor whenever they get too large. That leaves every ratio `A_i / B_i`
and every sign unchanged.
'''

from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Iterable, Tuple, Union

import numpy as np

from .core import SampleSet, ThieleModel
from .errors import InsufficientSamples, InvalidInput, OverflowDetected

logger = logging.getLogger('adaptive-thiele')

SCALE_THRESHOLD = 1e100
'''Magnitude above which a scaled trace rescales, and an unscaled one is reported
as overflowing.'''

DISTINCT_RTOL = 1e-12
'''Relative size below which two consecutive convergents are considered equal at
a point.'''

RESIDUAL_SCALE_FLOOR = 1e-8
'''Smallest coefficient size the residual identity divides by, relative to the
largest coefficient of the model.'''


@dataclass(frozen=True)
class ConvergentTrace:
    '''
    Numerators and denominators of all convergents at one point.

    Parameters:
        x: the point
        pairs: `(A_i, B_i)` for `i = -2, ..., m`; use `pair(i)` to index by `i`.
        scaled: whether the values were rescaled along the way.
        scale_log: for each index, the natural log of the total factor that had been
            divided out when that pair was recorded. The unscaled values are
            `pair(i) * exp(scale_log[i + 2])`.
    '''

    x: float
    pairs: Tuple[Tuple[float, float], ...]
    scaled: bool
    scale_log: Tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.pairs) - 3

    def pair(self, i: int) -> Tuple[float, float]:
        '''The pair `(A_i, B_i)`, for `-2 <= i <= m`.'''
        if not -2 <= i <= self.order:
            raise IndexError(f'Convergent index {i} outside -2..{self.order}')
        return self.pairs[i + 2]

    def ratio(self, i: int) -> float:
        '''The value of the convergent `C_i`, i.e. `A_i / B_i`.'''
        a, b = self.pair(i)
        with np.errstate(divide='ignore', invalid='ignore'):
            return float(np.float64(a) / np.float64(b))

    def true_log_scale(self, i: int) -> float:
        '''
        The natural log of the factor divided out of `pair(i)`; 0 for an unscaled
        trace.
        '''
        self.pair(i)
        return self.scale_log[i + 2]

    def ratios(self) -> Tuple[float, ...]:
        '''The values of `C_0, ..., C_m`.'''
        return tuple(self.ratio(i) for i in range(self.order + 1))


def _recurrence(model: ThieleModel, x: np.ndarray, scaled: bool):
    '''
    Run the three-term recurrence at several points at once.

    Returns:
        Arrays `A`, `B` and `scale_log` of shape `(m + 3, len(x))`, where row `r`
            holds index `i = r - 2`.
    '''
    nodes = np.asarray(model.nodes)
    coeffs = np.asarray(model.coeffs)
    rows = model.order + 3

    A = np.empty((rows, x.size))
    B = np.empty((rows, x.size))
    scale_log = np.zeros((rows, x.size))
    A[0], B[0] = 0.0, 1.0
    A[1], B[1] = 1.0, 0.0
    A[2], B[2] = coeffs[0], 1.0

    a_prev, b_prev = A[2].copy(), B[2].copy()
    a_lag, b_lag = A[1].copy(), B[1].copy()
    logs = np.zeros(x.size)

    with np.errstate(over='ignore', invalid='ignore'):
        for i in range(1, model.order + 1):
            step = x - nodes[i - 1]
            a_cur = coeffs[i] * a_prev + step * a_lag
            b_cur = coeffs[i] * b_prev + step * b_lag

            if scaled:
                size = np.maximum(np.abs(a_cur), np.abs(b_cur))
                factor = np.where(size > SCALE_THRESHOLD, size, 1.0)
                # the lagged pair is divided too, so the next step stays consistent
                a_cur, b_cur = a_cur / factor, b_cur / factor
                a_prev, b_prev = a_prev / factor, b_prev / factor
                logs = logs + np.log(factor)

            A[i + 2], B[i + 2] = a_cur, b_cur
            scale_log[i + 2] = logs
            a_lag, b_lag, a_prev, b_prev = a_prev, b_prev, a_cur, b_cur

    return A, B, scale_log


def convergent_trace(model: ThieleModel, x: float, scaled: bool = False) -> ConvergentTrace:
    '''
    Evaluate `(A_i(x), B_i(x))` for every convergent of a model.

    Parameters:
        model: the continued fraction
        x: the point
        scaled: if `True`, rescale whenever `max(|A_i|, |B_i|)` exceeds `1e100`.

    Returns:
        The trace at `x`.
    '''
    A, B, scale_log = _recurrence(model, np.array([float(x)]), scaled)
    pairs = tuple((float(a), float(b)) for a, b in zip(A[:, 0], B[:, 0]))
    return ConvergentTrace(
        x=float(x),
        pairs=pairs,
        scaled=scaled,
        scale_log=tuple(float(s) for s in scale_log[:, 0]),
    )


def numerator_denominator(model: ThieleModel, xs: Iterable[float],
                          scaled: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    '''
    The final numerator `A_m` and denominator `B_m` at several points.

    With `scaled=True`, each point carries its own positive factor: the sign of both
    values and their ratio are meaningful, their magnitude is not.
    '''
    A, B, _ = _recurrence(model, np.asarray(list(xs), dtype=float), scaled)
    return A[-1], B[-1]


def exact_numerator_denominator(model: ThieleModel,
                                x: Union[float, Fraction]) -> Tuple[Fraction, Fraction]:
    '''
    The final numerator `A_m` and denominator `B_m` at one point, in exact rational
    arithmetic.

    Nodes and coefficients are doubles, which convert to `Fraction` without
    rounding, so the signs of the result are those of the stored model. This is
    slow, and meant for deciding cases where the floating point recurrence is
    dominated by rounding.
    '''
    x = Fraction(x)
    a_lag, b_lag = Fraction(1), Fraction(0)
    a_prev, b_prev = Fraction(model.coeffs[0]), Fraction(1)
    for i in range(1, model.order + 1):
        coeff = Fraction(model.coeffs[i])
        step = x - Fraction(model.nodes[i - 1])
        a_lag, b_lag, a_prev, b_prev = (
            a_prev, b_prev,
            coeff * a_prev + step * a_lag, coeff * b_prev + step * b_lag,
        )
    return a_prev, b_prev


def check_consecutive_distinct(model: ThieleModel, sample_xs: Iterable[float],
                               rtol: float = DISTINCT_RTOL) -> bool:
    '''
    Check that every two consecutive convergents of a model differ.

    Two convergents `C_i` and `C_{i+1}` count as different if at some sample point
    `|A_i B_{i+1} - A_{i+1} B_i|` exceeds `rtol` times `|A_i B_{i+1}| + |A_{i+1} B_i|`.
    A model of order 0 has no consecutive pair and passes trivially.

    Parameters:
        model: the continued fraction
        sample_xs: at least `m + 2` points, none of them a node of the model.
        rtol: relative threshold for the determinant.

    Returns:
        Whether all consecutive convergents differ.

    Raises:
        InsufficientSamples: if there are fewer than `m + 2` sample points, or a
            sample coincides with a node.
    '''
    xs = np.asarray(list(sample_xs), dtype=float)
    if xs.size < model.order + 2:
        raise InsufficientSamples(
            f'Need at least {model.order + 2} sample points, got {xs.size}'
        )
    if np.isin(xs, model.nodes).any():
        raise InsufficientSamples('Sample points must not coincide with model nodes')

    A, B, _ = _recurrence(model, xs, scaled=True)
    for i in range(model.order):
        lhs = A[i + 2] * B[i + 3]
        rhs = A[i + 3] * B[i + 2]
        if not np.any(np.abs(lhs - rhs) > rtol * (np.abs(lhs) + np.abs(rhs))):
            logger.info('convergents %d and %d coincide at all samples', i, i + 1)
            return False
    return True


def check_phi_residual_identity(model: ThieleModel, data: SampleSet) -> float:
    '''
    Recompute each coefficient from the linearized residuals of the convergents.

    For an adaptively built model, every coefficient satisfies

        a_{j+1} = -(z_{j+1} - z_j) * (f B_{j-1} - A_{j-1}) / (f B_j - A_j)

    with `A`, `B` and `f` taken at `z_{j+1}`. This function evaluates the right-hand
    side with unscaled traces for each `j < m` and compares it with the stored
    coefficient.

    Parameters:
        model: a model fitted from `data`
        data: the interpolation data

    Returns:
        The largest relative deviation over all coefficients `a_1, ..., a_m`. Each
            deviation is divided by `max(|a_{j+1}|, 1e-8 * max_k |a_k|)`, so a
            coefficient that is zero up to rounding is measured against the size of
            the model. If all coefficients are zero, the deviation is absolute.

    Raises:
        InvalidInput: if the model has order 0, or a node is not in `data`.
        OverflowDetected: if the unscaled recurrence exceeds `1e100`. In practice
            this limits the check to orders up to about 30.
    '''
    if model.order < 1:
        raise InvalidInput('The residual identity needs a model of order >= 1')

    nodes = np.asarray(model.nodes)
    try:
        fs = np.array([data.value_at(z) for z in nodes[1:]])
    except KeyError as e:
        raise InvalidInput(f'Model node {e.args[0]!r} is not in the data')

    A, B, _ = _recurrence(model, nodes[1:], scaled=False)
    floor = RESIDUAL_SCALE_FLOOR * float(np.max(np.abs(model.coeffs)))

    worst = 0.0
    with np.errstate(divide='ignore', invalid='ignore'):
        for j in range(model.order):
            x, f = nodes[j + 1], fs[j]
            used = np.array([A[j + 1, j], B[j + 1, j], A[j + 2, j], B[j + 2, j]])
            if not np.all(np.isfinite(used)) or np.max(np.abs(used)) > SCALE_THRESHOLD:
                raise OverflowDetected(
                    f'Unscaled recurrence exceeds {SCALE_THRESHOLD:g} at step {j + 1}'
                )
            numerator = f * B[j + 1, j] - A[j + 1, j]
            denominator = f * B[j + 2, j] - A[j + 2, j]
            phi = -(x - nodes[j]) * numerator / denominator

            target = model.coeffs[j + 1]
            deviation = abs(phi - target)
            scale = max(abs(target), floor)
            if scale > 0:
                deviation /= scale
            if not np.isfinite(deviation):
                return float('inf')
            worst = max(worst, float(deviation))
    return worst
