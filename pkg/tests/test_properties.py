'''
Property tests of the adaptive builder on generated data.
'''

import numpy as np
from hypothesis import given, settings
import hypothesis.strategies as st
import pytest

from adaptive_thiele.core import (
    DEFAULT_TOL, FitConfig, SampleSet, eval_cfrac, eval_cfrac_batch, fit_adaptive
)


@st.composite
def sample_sets(draw):
    '''
    Points on a grid of spacing 1/8 in [-4, 4], with values from a rational
    function, a shifted `|x|`, or random numbers.
    '''
    ticks = draw(st.lists(st.integers(-32, 32), min_size=1, max_size=14, unique=True))
    xs = np.array(ticks) / 8
    kind = draw(st.sampled_from(['rational', 'piecewise', 'random']))

    if kind == 'rational':
        p = draw(st.lists(st.integers(-5, 5), min_size=1, max_size=4))
        q = draw(st.lists(st.integers(-2, 2), min_size=0, max_size=3))
        numerator = np.polynomial.Polynomial(p)(xs)
        # the constant 10 keeps the denominator away from zero on [-4, 4]
        denominator = 10 + np.polynomial.Polynomial([0] + q)(xs / 4)
        fs = numerator / denominator
    elif kind == 'piecewise':
        shift = draw(st.integers(-16, 16)) / 8
        fs = np.abs(xs - shift)
    else:
        fs = np.array(draw(st.lists(
            st.floats(-100, 100, allow_nan=False, allow_infinity=False),
            min_size=len(xs), max_size=len(xs),
        )))

    return SampleSet(tuple(xs), tuple(fs))


@given(sample_sets())
@settings(max_examples=200, deadline=None)
def test_model_is_valid(data):
    model, report = fit_adaptive(data)

    assert all(np.isfinite(model.coeffs))
    assert model.order <= len(data) - 1
    assert set(model.nodes) <= set(data.xs)
    assert len(set(model.nodes)) == len(model.nodes)
    assert report.steps_taken == model.order + 1
    assert len(report.node_errors) == len(data)


@given(sample_sets())
@settings(max_examples=200, deadline=None)
def test_stopping_is_sound(data):
    _, report = fit_adaptive(data)
    if report.stopped_early:
        assert report.stop_error < report.stop_threshold
    assert all(error > 0 for error in report.selection_errors)


@given(sample_sets())
@settings(max_examples=200, deadline=None)
def test_selection_errors_exceed_threshold(data):
    model, report = fit_adaptive(data)
    xs, fs = data.arrays()
    for k, error in enumerate(report.selection_errors):
        remaining = np.abs(fs[~np.isin(xs, model.nodes[:k + 1])])
        scale = float(np.max(remaining))
        threshold = DEFAULT_TOL * scale if scale else DEFAULT_TOL
        assert error >= threshold


@given(sample_sets())
@settings(max_examples=200, deadline=None)
def test_fit_interpolates_nodes(data):
    model, _ = fit_adaptive(data)
    size = max(1.0, float(np.max(np.abs(data.fs))))
    for z in model.nodes:
        value = eval_cfrac(model, z)
        if np.isnan(value):
            # an inner tail summing to zero at a node; see eval_cfrac
            continue
        assert abs(value - data.value_at(z)) <= 1e-8 * size


def test_node_value_can_be_nan():
    data = SampleSet((0.0, 0.125, 0.25), (0.0, 1.0, 1.0))
    model, _ = fit_adaptive(data)
    assert model.coeffs == pytest.approx((0.0, 0.125, 1.0))
    assert np.isnan(eval_cfrac(model, 0.0))
    # the fraction is x / x, which does not attain f(0) = 0
    assert eval_cfrac(model, 1e-3) == pytest.approx(1.0, rel=1e-9)
    for z in model.nodes[1:]:
        assert eval_cfrac(model, z) == pytest.approx(data.value_at(z))


@given(sample_sets(), st.floats(1e-14, 1e-6))
@settings(max_examples=100, deadline=None)
def test_fit_is_deterministic(data, tol):
    first, _ = fit_adaptive(data, FitConfig(tol=tol))
    second, _ = fit_adaptive(data, FitConfig(tol=tol))
    assert first == second


@given(sample_sets(), st.lists(st.floats(-5, 5), max_size=10))
@settings(max_examples=100, deadline=None)
def test_batch_matches_scalar(data, xs):
    model, _ = fit_adaptive(data)
    batch = eval_cfrac_batch(model, xs)
    scalars = np.array([eval_cfrac(model, x) for x in xs], dtype=float)
    np.testing.assert_array_equal(batch, scalars)
