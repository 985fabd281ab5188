import numpy as np
import pytest

from adaptive_thiele.convergents import (
    check_consecutive_distinct, check_phi_residual_identity, convergent_trace,
    exact_numerator_denominator, numerator_denominator,
)
from adaptive_thiele.core import FitConfig, SampleSet, ThieleModel, eval_cfrac_batch, fit_adaptive
from adaptive_thiele.errors import InsufficientSamples, InvalidInput, OverflowDetected
from adaptive_thiele.newman import newman_points, pole_scan

from . import oracle


def example_model():
    # 1 / (1 + x), fitted in the order 0, 1, 2
    return ThieleModel((0.0, 1.0, 2.0), (1.0, -2.0, -1.0))


def reciprocal_fit():
    return fit_adaptive(SampleSet((0.0, 1.0, 2.0), (1.0, 1 / 2, 1 / 3)))[0]


def rational_fit():
    xs = np.linspace(-1, 1, 12)
    fs = (1 + xs - 0.5 * xs ** 3) / (2 + 0.3 * xs + 0.2 * xs ** 2)
    return fit_adaptive(SampleSet(tuple(xs), tuple(fs)), FitConfig(tol=1e-10))[0]


def exp_fit():
    xs = np.linspace(-2, 2, 15)
    return fit_adaptive(SampleSet(tuple(xs), tuple(np.exp(xs))))[0]


def test_trace_example():
    trace = convergent_trace(example_model(), 2.0)
    assert trace.order == 2
    assert not trace.scaled
    assert trace.pair(-2) == (0.0, 1.0)
    assert trace.pair(-1) == (1.0, 0.0)
    assert trace.pair(0) == (1.0, 1.0)
    assert trace.pair(1) == (0.0, -2.0)
    assert trace.pair(2) == (1.0, 3.0)
    assert trace.ratio(2) == pytest.approx(1 / 3)
    assert trace.ratios()[0] == 1.0
    with pytest.raises(IndexError):
        trace.pair(3)


def test_trace_matches_exact_recurrence():
    model = reciprocal_fit()
    for x in [-0.5, 0.25, 4.5]:
        trace = convergent_trace(model, x)
        exact = oracle.recurrence(model.nodes, model.coeffs, x)
        for (a, b), (a_exact, b_exact) in zip(trace.pairs, exact):
            assert a == pytest.approx(float(a_exact), rel=1e-14, abs=1e-300)
            assert b == pytest.approx(float(b_exact), rel=1e-14, abs=1e-300)


def test_trace_seeds():
    model = exp_fit()
    for x in [-1.5, 0.0, 7.0]:
        trace = convergent_trace(model, x, scaled=True)
        assert trace.pair(0) == (model.coeffs[0], 1.0)
        assert trace.pair(-1) == (1.0, 0.0)
        assert trace.pair(-2) == (0.0, 1.0)


def test_scaled_trace():
    # large partial numerators make the recurrence grow past the threshold
    model = ThieleModel(tuple(np.arange(60.0)), tuple(np.full(60, 0.5)))
    x = 1e4
    plain = convergent_trace(model, x)
    scaled = convergent_trace(model, x, scaled=True)

    assert scaled.scaled
    assert scaled.true_log_scale(model.order) > 0
    assert plain.true_log_scale(model.order) == 0
    assert max(abs(v) for pair in plain.pairs for v in pair) > 1e100
    assert all(np.isfinite(v) for pair in scaled.pairs for v in pair)

    for i in range(model.order + 1):
        assert scaled.ratio(i) == pytest.approx(plain.ratio(i), rel=1e-12)
        assert np.sign(scaled.pair(i)[1]) == np.sign(plain.pair(i)[1])
        a, b = scaled.pair(i)
        assert a * np.exp(scaled.true_log_scale(i)) == pytest.approx(plain.pair(i)[0], rel=1e-10)


def test_numerator_denominator():
    model = example_model()
    A, B = numerator_denominator(model, [2.0, 0.5], scaled=False)
    assert list(A) == [1.0, convergent_trace(model, 0.5).pair(2)[0]]
    assert B[0] == 3.0


def test_exact_numerator_denominator():
    model = example_model()
    assert exact_numerator_denominator(model, 2.0) == (1, 3)
    assert exact_numerator_denominator(model, -1.0) == (1, 0)

    model, _ = fit_adaptive(newman_points(5))
    for x in [-0.5, 0.0, 3e-16, 0.75]:
        assert exact_numerator_denominator(model, x) == oracle.recurrence(model.nodes, model.coeffs, x)[-1]


@pytest.mark.parametrize('n', [5, 6, 10, None])
def test_recurrence_matches_backward_evaluation(n):
    if n is None:
        model = exp_fit()
    else:
        model, _ = fit_adaptive(newman_points(n))
    assert model.order <= 20

    rng = np.random.default_rng(11)
    xs = rng.uniform(-1, 1, 100)
    poles = pole_scan(model, -1, 1, 20001)
    away = [
        x for x in xs
        if all(x < left - 1e-3 or x > right + 1e-3 for left, right in poles)
    ]

    A, B = numerator_denominator(model, away)
    ratio = A / B
    values = eval_cfrac_batch(model, away)
    assert np.all(np.abs(values - ratio) / np.maximum(1, np.abs(ratio)) <= 1e-9)


@pytest.mark.parametrize('fit', [reciprocal_fit, rational_fit, exp_fit])
def test_consecutive_convergents_differ(fit):
    model = fit()
    rng = np.random.default_rng(3)
    samples = rng.uniform(-6, 6, max(10, model.order + 2))
    assert check_consecutive_distinct(model, samples)


def test_consecutive_convergents_differ_newman():
    for n in [5, 6, 12]:
        data = newman_points(n)
        model, _ = fit_adaptive(data)
        samples = np.linspace(-0.999, 0.999, 2 * model.order + 2)
        assert check_consecutive_distinct(model, samples)


def test_consecutive_convergents_order_zero():
    model = ThieleModel((0.0,), (2.0,))
    assert check_consecutive_distinct(model, [0.5, 1.5])


def test_consecutive_convergents_insufficient_samples():
    model = example_model()
    with pytest.raises(InsufficientSamples):
        check_consecutive_distinct(model, [0.5, 1.5, 2.5])
    with pytest.raises(InsufficientSamples):
        check_consecutive_distinct(model, [0.5, 1.0, 2.5, 3.5])


def test_residual_identity_reciprocal():
    data = SampleSet((0.0, 1.0, 2.0), (1.0, 1 / 2, 1 / 3))
    model, _ = fit_adaptive(data)
    assert check_phi_residual_identity(model, data) <= 1e-12


def test_residual_identity_newman():
    data = newman_points(5)
    model, _ = fit_adaptive(data)
    assert check_phi_residual_identity(model, data) <= 1e-6


def test_residual_identity_rounding_zero_coefficient():
    # a_1 is zero up to rounding, so it is measured against the largest coefficient
    model = ThieleModel((0.0, 1.0, 2.0), (0.0, 3e-15, 1.0))
    data = SampleSet((0.0, 1.0, 2.0), (0.0, 1e15, 2 / (1 + 3e-15)))
    assert check_phi_residual_identity(model, data) <= 1e-6

    # the same deviation on coefficients of that size is not excused
    model = ThieleModel((0.0, 1.0, 2.0), (0.0, 3e-15, 3e-15))
    assert check_phi_residual_identity(model, data) > 0.5


def test_residual_identity_random():
    rng = np.random.default_rng(5)
    for _ in range(20):
        size = int(rng.integers(3, 11))
        xs = np.sort(rng.uniform(-1, 1, size))
        fs = rng.uniform(-1, 1, size)
        data = SampleSet(tuple(xs), tuple(fs))
        model, _ = fit_adaptive(data)
        if model.order < 1:
            continue
        assert model.order <= 12
        assert check_phi_residual_identity(model, data) <= 1e-6


def test_residual_identity_errors():
    data = SampleSet((0.0, 1.0, 2.0), (1.0, 1 / 2, 1 / 3))
    with pytest.raises(InvalidInput):
        check_phi_residual_identity(ThieleModel((0.0,), (1.0,)), data)
    with pytest.raises(InvalidInput):
        check_phi_residual_identity(ThieleModel((0.0, 5.0), (1.0, 2.0)), data)

    nodes = tuple(np.arange(40.0))
    model = ThieleModel(nodes, tuple(np.full(40, 1e6)))
    with pytest.raises(OverflowDetected):
        check_phi_residual_identity(model, SampleSet(nodes, tuple(np.zeros(40))))
