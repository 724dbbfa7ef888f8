import math

import pytest
from hypothesis import given, settings, strategies as st

from conftest import simpson
from domcert.quadrature import (
    QuadratureError,
    QuadResult,
    _guarded,
    integrate,
    integrate_open01,
)


class TestConstantExactness:
    # the center weights are renormalized so both embedded rules sum to
    # exactly 2.0; dyadic constants must then integrate with zero error
    @pytest.mark.parametrize("c", [1.0, 0.5, 2.0, -4.0])
    @pytest.mark.parametrize("bounds", [(0.0, 1.0), (0.0, 2.0), (-1.0, 3.0)])
    def test_dyadic_constants_exact(self, c, bounds):
        a, b = bounds
        r = integrate(lambda x: c, a, b)
        assert r.value == c * (b - a)
        assert r.subdivisions == 1

    def test_arbitrary_constant_within_two_ulp(self):
        r = integrate(lambda x: 0.7, 0.0, 1.0)
        assert abs(r.value - 0.7) <= 2.0 * math.ulp(0.7)


class TestSmoothIntegrands:
    def test_polynomials_through_degree_six(self):
        for k in range(7):
            r = integrate(lambda x, k=k: x**k, 0.0, 1.0)
            assert abs(r.value - 1.0 / (k + 1)) <= max(r.error_estimate, 1e-10)

    def test_exponential(self):
        r = integrate(math.exp, -1.0, 2.0)
        truth = math.e**2 - math.exp(-1.0)
        assert abs(r.value - truth) <= max(r.error_estimate, 1e-10)

    def test_sine_over_half_period(self):
        r = integrate(math.sin, 0.0, math.pi)
        assert abs(r.value - 2.0) <= max(r.error_estimate, 1e-10)

    def test_oscillatory(self):
        r = integrate(lambda x: math.cos(10.0 * x), 0.0, 1.0)
        assert abs(r.value - math.sin(10.0) / 10.0) <= max(r.error_estimate, 1e-10)

    def test_runge_bump(self):
        r = integrate(lambda x: 1.0 / (1.0 + 25.0 * x * x), -1.0, 1.0)
        assert abs(r.value - 0.4 * math.atan(5.0)) <= max(r.error_estimate, 1e-10)

    def test_estimate_covers_true_error_on_kink(self):
        r = integrate(lambda x: abs(x - 1.0 / 3.0), 0.0, 1.0)
        assert abs(r.value - 5.0 / 18.0) <= max(r.error_estimate, 1e-10)
        assert r.subdivisions > 1

    def test_square_root_endpoint_derivative_blowup(self):
        r = integrate(math.sqrt, 0.0, 1.0)
        assert abs(r.value - 2.0 / 3.0) <= max(r.error_estimate, 1e-9)

    @settings(max_examples=30, deadline=None)
    @given(
        st.floats(min_value=-3.0, max_value=3.0),
        st.floats(min_value=-2.0, max_value=2.0),
        st.floats(min_value=-1.0, max_value=1.0),
    )
    def test_matches_simpson_oracle_on_random_cubics(self, c0, c1, c3):
        fn = lambda x: c0 + c1 * x + c3 * x**3
        r = integrate(fn, -1.0, 2.0)
        assert r.value == pytest.approx(simpson(fn, -1.0, 2.0), abs=1e-8)


class TestDriver:
    def test_splits_are_deterministic(self):
        fn = lambda x: math.sin(7.0 * x) + abs(x - 0.3)
        a = integrate(fn, 0.0, 2.0)
        b = integrate(fn, 0.0, 2.0)
        assert a == b

    def test_budget_error(self):
        with pytest.raises(QuadratureError) as info:
            integrate(lambda x: math.sin(50.0 * x), 0.0, 10.0, tol=1e-14, max_panels=2)
        assert info.value.reason == "budget"

    def test_invalid_bounds(self):
        with pytest.raises(ValueError):
            integrate(math.sin, 1.0, 0.0)
        with pytest.raises(ValueError):
            integrate(math.sin, 0.0, math.inf)

    def test_invalid_tol(self):
        with pytest.raises(ValueError):
            integrate(math.sin, 0.0, 1.0, tol=0.0)

    def test_result_is_frozen(self):
        r = integrate(lambda x: x, 0.0, 1.0)
        assert isinstance(r, QuadResult)
        with pytest.raises(Exception):
            r.value = 0.0


class TestGuardedWrapper:
    def test_fault_at_edge_retries_one_nudge_inside(self):
        g = _guarded(lambda x: 1.0 / x, 0.0, 1.0)
        assert g(0.0) == 1e12

    def test_fault_at_interior_node_is_eval_error(self):
        def fn(x):
            if x == 0.5:
                raise ValueError("pole")
            return 1.0

        g = _guarded(fn, 0.0, 1.0)
        with pytest.raises(QuadratureError) as info:
            g(0.5)
        assert info.value.reason == "eval"

    def test_persistent_edge_fault_is_eval_error(self):
        def fn(x):
            raise ValueError("always")

        g = _guarded(fn, 0.0, 1.0)
        with pytest.raises(QuadratureError) as info:
            g(0.0)
        assert info.value.reason == "eval"


class TestOpenUnitInterval:
    def test_regular_integrand_matches_closed_value(self):
        r = integrate_open01(lambda t: t)
        assert abs(r.value - 0.5) <= 1e-9

    def test_square_root(self):
        r = integrate_open01(math.sqrt)
        assert abs(r.value - 2.0 / 3.0) <= max(r.error_estimate, 1e-10)

    def test_inverse_square_root_converges(self):
        r = integrate_open01(lambda t: t**-0.5)
        assert abs(r.value - 2.0) <= max(r.error_estimate, 1e-10)
        assert math.isfinite(r.value)

    def test_log_singularity(self):
        r = integrate_open01(lambda t: -math.log(t))
        assert abs(r.value - 1.0) <= max(r.error_estimate, 1e-10)

    def test_quarter_power_singularity(self):
        r = integrate_open01(lambda t: t**-0.25)
        assert abs(r.value - 4.0 / 3.0) <= max(r.error_estimate, 1e-10)

    def test_harmonic_divergence_reported_as_inf(self):
        r = integrate_open01(lambda t: 1.0 / t)
        assert math.isinf(r.value)
        assert math.isinf(r.error_estimate)

    def test_quadratic_divergence_reported_as_inf(self):
        r = integrate_open01(lambda t: 1.0 / (t * t))
        assert math.isinf(r.value)

    def test_divergence_is_a_value_not_an_exception(self):
        r = integrate_open01(lambda t: 1.0 / t)
        assert isinstance(r, QuadResult)
