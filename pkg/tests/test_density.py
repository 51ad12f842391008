import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from cube_sections.density import (
    MAX_CLOSED_FORM_WEIGHTS,
    cdf_at,
    characteristic_function,
    density_at,
    density_by_convolution,
    density_closed_form,
    eval_cdf,
    eval_density,
)
from cube_sections.weights import InvalidInputError

weights_st = st.lists(
    st.floats(0.05, 3.0, allow_nan=False), min_size=1, max_size=7
)


def _confluence_factor(w) -> float:
    # corner sums divide by the product of the weights, so cancellation in
    # O(1) outputs is amplified by prod(max|w| / |w_i|) when several small
    # weights coincide; tolerances on exact identities scale with this
    b = np.abs(np.asarray(w, dtype=float))
    return float(np.prod(np.max(b) / b))


# -- frozen values -----------------------------------------------------


def test_box_density():
    f = density_closed_form((2.0,))
    assert f.support == (-2.0, 2.0)
    assert f(0.0) == pytest.approx(0.25)
    assert f(1.99) == pytest.approx(0.25)
    assert f(2.01) == 0.0


def test_triangle_values():
    f = density_closed_form((1.0, 1.0))
    assert eval_density(f, 0.0) == pytest.approx(0.5)
    assert eval_density(f, 2.0) == 0.0
    assert eval_density(f, -1.0) == pytest.approx(0.25)


def test_three_and_four_weight_centers():
    assert density_at((1.0, 1.0, 1.0), 0.0) == pytest.approx(3.0 / 8.0, rel=1e-14)
    assert density_at((1.0, 1.0, 1.0, 1.0), 0.0) == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert density_at((1.0, 1.0, 2.0, 2.0), 0.0) == pytest.approx(5.0 / 24.0, rel=1e-13)


def test_triangle_cdf_value():
    f = density_closed_form((1.0, 1.0))
    assert eval_cdf(f, 1.0) == pytest.approx(7.0 / 8.0, rel=1e-14)
    assert cdf_at((1.0, 1.0), 1.0) == pytest.approx(7.0 / 8.0, rel=1e-14)


def test_sign_and_zero_weights_are_dropped():
    f = density_closed_form((-1.0, 0.0, 1.0))
    g = density_closed_form((1.0, 1.0))
    np.testing.assert_array_equal(f.breakpoints, g.breakpoints)
    np.testing.assert_array_equal(f.coefficients, g.coefficients)


def test_dust_weight_is_dropped():
    # a weight under the ulp of the span must not poison the expansion
    assert density_at((1.0, 1e-20), 0.0) == pytest.approx(0.5, rel=1e-14)
    assert density_at((1e-20, 0.70721, 0.70701), 0.0) == pytest.approx(
        density_at((0.70721, 0.70701), 0.0), rel=1e-12
    )


def test_errors():
    with pytest.raises(InvalidInputError):
        density_closed_form((0.0, 0.0))
    with pytest.raises(InvalidInputError):
        density_at(np.ones(MAX_CLOSED_FORM_WEIGHTS + 1), 0.0)


# -- structural invariants ---------------------------------------------


@given(weights_st)
@settings(deadline=None)
def test_normalization(w):
    f = density_closed_form(w)
    assert abs(f.total_integral - 1.0) <= 1e-13 * max(1.0, _confluence_factor(w))


@given(weights_st)
@settings(deadline=None)
def test_support_and_breakpoint_symmetry(w):
    f = density_closed_form(w)
    total = float(np.sum(np.abs(w)))
    lo, hi = f.support
    assert lo == pytest.approx(-total, rel=1e-13)
    assert hi == pytest.approx(total, rel=1e-13)
    np.testing.assert_array_equal(f.breakpoints, -f.breakpoints[::-1])


@given(weights_st, st.floats(-0.99, 0.99))
@settings(deadline=None)
def test_evenness(w, frac):
    f = density_closed_form(w)
    x = frac * float(np.sum(np.abs(w)))
    if np.min(np.abs(f.breakpoints - x)) < 1e-9 or np.min(np.abs(f.breakpoints + x)) < 1e-9:
        return
    left, right = f(x), f(-x)
    assert left == pytest.approx(right, rel=1e-13, abs=1e-15)


@given(weights_st, st.floats(-1.2, 1.2))
@settings(deadline=None)
def test_density_nonnegative(w, frac):
    x = frac * float(np.sum(np.abs(w)))
    assert density_at(w, x) >= -1e-13


@given(weights_st, st.sampled_from([0.5, 2.0, 10.0]), st.floats(-0.9, 0.9))
@settings(deadline=None)
def test_scale_covariance(w, c, frac):
    # abs floor covers cancellation noise at skewed weight ratios
    r = frac * float(np.sum(np.abs(w)))
    scaled = [c * v for v in w]
    assert density_at(scaled, c * r) == pytest.approx(
        density_at(w, r) / c, rel=1e-12, abs=1e-12
    )


def test_scale_covariance_reference_weights():
    w = (1.0, 1.0, 2.0, 2.0)
    for c in (0.5, 2.0, 10.0):
        scaled = tuple(c * v for v in w)
        for r in (0.0, 0.5, 1.7, 4.0):
            assert density_at(scaled, c * r) == pytest.approx(
                density_at(w, r) / c, rel=1e-12
            )


@settings(deadline=None, max_examples=100)
@given(
    st.lists(st.floats(0.05, 3.0), min_size=1, max_size=8),
    st.lists(st.floats(-1.05, 1.05), min_size=5, max_size=20),
)
def test_closed_form_equals_convolution(w, fracs):
    f = density_closed_form(w)
    g = density_by_convolution(w)
    total = float(np.sum(np.abs(w)))
    peak = max(float(np.max(np.abs(f.coefficients))), 1.0)
    for frac in fracs:
        x = frac * total
        assert abs(f(x) - g(x)) <= 1e-10 * peak


def test_convolution_agreement_dense_grid():
    w = (1.0, 1.0, 2.0, 2.0)
    f = density_closed_form(w)
    g = density_by_convolution(w)
    xs = np.linspace(-6.5, 6.5, 1000)
    assert np.max(np.abs(f(xs) - g(xs))) <= 1e-12


@given(weights_st, st.floats(-1.1, 1.1))
@settings(deadline=None)
def test_point_evaluators_match_pieces(w, frac):
    f = density_closed_form(w)
    x = frac * float(np.sum(np.abs(w)))
    assert density_at(w, x) == pytest.approx(float(f(x)), rel=1e-10, abs=1e-12)
    assert cdf_at(w, x) == pytest.approx(float(f.cumulative(x)), rel=1e-10, abs=1e-12)


@given(weights_st)
@settings(deadline=None)
def test_cdf_limits_and_center(w):
    total = float(np.sum(np.abs(w)))
    assert cdf_at(w, -total - 1.0) == 0.0
    assert cdf_at(w, total + 1.0) == 1.0
    tol = 1e-13 * max(1.0, _confluence_factor(w))
    assert cdf_at(w, 0.0) == pytest.approx(0.5, abs=tol)


def test_box_boundary_conventions():
    assert density_at((1.0,), -1.0) == pytest.approx(0.5)
    assert density_at((1.0,), 1.0) == 0.0
    assert cdf_at((2.0,), 0.0) == pytest.approx(0.5)
    assert cdf_at((2.0,), 1.0) == pytest.approx(0.75)


# -- Fourier side ------------------------------------------------------


def test_characteristic_function_values():
    assert characteristic_function((1.0, 1.0), 0.0) == pytest.approx(1.0)
    assert characteristic_function((1.0, 1.0), math.pi / 2.0) == pytest.approx(
        (2.0 / math.pi) ** 2, rel=1e-14
    )
    # zero weights contribute unit factors
    t = np.linspace(0.1, 5.0, 7)
    np.testing.assert_allclose(
        characteristic_function((1.0, 0.0), t),
        characteristic_function((1.0,), t),
        rtol=1e-15,
    )


@pytest.mark.parametrize(
    "w,r",
    [
        ((1.0, 1.0, 1.0), 0.0),
        ((1.0, 1.0, 1.0), 0.25),
        ((0.3, 0.4, 0.5), 0.0),
        ((0.3, 0.4, 0.5), 0.35),
        ((1.0, 1.0, 2.0, 2.0), 1.0),
    ],
)
def test_fourier_inversion(w, r):
    with warnings.catch_warnings():
        # the cos-weighted rule warns about cycle counts at wvar=0 but
        # still converges well inside the tolerance used below
        warnings.simplefilter("ignore")
        integral, _ = quad(
            lambda t: float(characteristic_function(w, t)),
            0.0,
            np.inf,
            weight="cos",
            wvar=r,
            limit=400,
        )
    assert integral / math.pi == pytest.approx(density_at(w, r), abs=1e-6)
