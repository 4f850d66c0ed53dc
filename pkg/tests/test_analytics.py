import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orfkit.analytics import (
    ORF,
    RFF,
    bias_bounds,
    block_sizes,
    bound_constants,
    closed_form_summary,
    orf_bias,
    orf_bias_grid,
    orf_variance,
    orf_variance_grid,
    rff_bias,
    rff_variance,
    variance_bounds,
    variance_dominance_interval,
)
from orfkit.errors import InvalidArgumentError
from orfkit.harness import jackknife_variance_stderr, kernel_replicates
from orfkit.specfun import first_zero, normalized_bessel, zeros


def interval_grid(end, max_points=1001):
    step = min(0.01, end / 1000.0)
    return np.arange(0.0, end + step / 2.0, step)


class TestClosedFormsRff:
    def test_bias_values(self):
        assert rff_bias(0.0) == 1.0
        assert rff_bias(40.0) <= 1e-300
        assert rff_bias(1.0) == pytest.approx(math.exp(-0.5), abs=0)

    def test_variance_values(self):
        assert rff_variance(3, 0.0) == 0.0
        assert rff_variance(5, 60.0) == pytest.approx(1.0 / 10.0, abs=1e-12)

    def test_variance_against_monte_carlo(self):
        p, d, z, s = 10, 6, 2.0, 20000
        x = np.zeros(d)
        x[0] = z
        reps = kernel_replicates(RFF, d, p, x, np.zeros(d), s, seed=2024)
        v_emp = np.mean((reps - reps.mean()) ** 2)
        se = jackknife_variance_stderr(reps)
        assert abs(v_emp - rff_variance(p, z)) <= 5 * se


class TestClosedFormsOrf:
    def test_bias_values(self):
        assert orf_bias(7, 0.0) == 1.0
        assert abs(orf_bias(3, math.pi)) <= 1e-12

    def test_bias_against_monte_carlo(self):
        d, p, z, s = 32, 8, 2.0, 8000
        x = np.zeros(d)
        x[0] = z
        reps = kernel_replicates(ORF, d, p, x, np.zeros(d), s, seed=11)
        m_emp = reps.mean()
        se = math.sqrt(np.mean((reps - m_emp) ** 2) / s)
        assert abs(m_emp - orf_bias(d, z)) <= 5 * se

    def test_variance_vanishes_at_zero(self):
        assert orf_variance(9, 4, 0.0) == 0.0

    def test_single_feature_reduction(self):
        # with one feature the covariance term drops out
        for z in (0.3, 1.1, 2.7):
            j2 = normalized_bessel(6, 2 * z)
            j1 = normalized_bessel(6, z)
            assert orf_variance(6, 1, z) == pytest.approx((1 + j2) / 2 - j1**2, abs=1e-15)

    def test_variance_against_monte_carlo(self):
        d, p, z, s = 32, 8, 2.0, 8000
        x = np.zeros(d)
        x[0] = z
        reps = kernel_replicates(ORF, d, p, x, np.zeros(d), s, seed=12)
        v_emp = np.mean((reps - reps.mean()) ** 2)
        se = jackknife_variance_stderr(reps)
        assert abs(v_emp - orf_variance(d, p, z)) <= 5 * se

    def test_blocked_variance_against_monte_carlo(self):
        d, p, z, s = 4, 10, 1.2, 60000
        assert block_sizes(d, p) == [4, 4, 2]
        x = np.zeros(d)
        x[0] = z
        reps = kernel_replicates(ORF, d, p, x, np.zeros(d), s, seed=13)
        v_emp = np.mean((reps - reps.mean()) ** 2)
        se = jackknife_variance_stderr(reps)
        assert abs(v_emp - orf_variance(d, p, z)) <= 5 * se

    def test_grid_matches_scalar(self):
        zg = np.arange(0.0, 8.0, 0.37)
        grid = orf_variance_grid(10, 3, zg)
        scalar = np.array([orf_variance(10, 3, float(z)) for z in zg])
        assert np.max(np.abs(grid - scalar)) <= 1e-12


class TestBoundConstants:
    def test_d4(self):
        c = bound_constants(4)
        direct = 2.0**0.25 * 4.0**0.75 * math.sqrt(1.0 - 4.0 / (2.0 * math.sqrt(2.0) * 8.0 - 4.0))
        assert c.b_d == direct
        assert c.b_d == pytest.approx(2.9807, abs=1e-4)
        assert c.c_d is None
        assert c.bias_interval_end == c.b_d

    def test_d16(self):
        c = bound_constants(16)
        assert c.alpha_d == pytest.approx(8.0**0.75, abs=1e-12)
        assert c.beta_d == pytest.approx(0.5 * math.sqrt(63.0), abs=1e-12)
        assert c.variance_interval_end == c.alpha_d

    def test_linear_regime_constant_wins_eventually(self):
        c = bound_constants(100)
        assert c.c_d is not None and c.c_d > c.b_d
        assert bound_constants(16).c_d < bound_constants(16).b_d

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_small_d_convention(self, d):
        c = bound_constants(d)
        assert c.c_d is None
        assert c.bias_interval_end == c.b_d

    @pytest.mark.parametrize("d", [2, 5, 17, 64, 301])
    def test_constants_positive_and_below_first_zero(self, d):
        c = bound_constants(d)
        assert 0 < c.alpha_d and 0 <= c.beta_d and 0 < c.b_d
        assert c.first_zero == first_zero(d)
        assert c.bias_interval_end < c.first_zero


class TestBiasBounds:
    def test_at_zero(self):
        assert bias_bounds(5, 0.0) == (1.0, 1.0, True)

    def test_boundary_is_inside(self):
        end = bound_constants(10).bias_interval_end
        assert bias_bounds(10, end)[2] is True
        assert bias_bounds(10, math.nextafter(end, math.inf))[2] is False

    def test_sandwich_holds_pointwise(self):
        lower, upper, inside = bias_bounds(50, 3.0)
        assert inside
        assert lower <= orf_bias(50, 3.0) <= upper

    @pytest.mark.parametrize("d", [2, 10])
    def test_sandwich_on_interval(self, d):
        end = bound_constants(d).bias_interval_end
        zg = interval_grid(end)
        vals = orf_bias_grid(d, zg)
        lower, upper, inside = bias_bounds(d, zg)
        assert np.all(inside)
        assert np.all(vals >= lower - 1e-12)
        assert np.all(vals <= upper + 1e-12)

    def test_upper_extends_to_second_zero(self):
        second = zeros(10, 2).zeros[1]
        zg = np.arange(0.0, second, 0.01)
        vals = orf_bias_grid(10, zg)
        assert np.all(vals <= np.exp(-(zg**2) / 20.0) + 1e-12)

    def test_bias_difference_bound(self):
        d = 24
        end = bound_constants(d).bias_interval_end
        zg = interval_grid(end)
        diff = orf_bias_grid(d, zg) - rff_bias(zg)
        assert np.all(diff >= -1e-12)
        assert np.all(diff <= np.exp(-(zg**2) / (2 * d)) - np.exp(-(zg**2) / 2.0) + 1e-12)


class TestVarianceBounds:
    def test_at_zero(self):
        lower, upper, inside = variance_bounds(7, 3, 0.0)
        assert lower == 0.0 and upper == 0.0 and inside

    def test_envelope_holds_pointwise(self):
        lower, upper, inside = variance_bounds(100, 10, 2.0)
        assert inside
        assert lower <= orf_variance(100, 10, 2.0) <= upper

    def test_upper_at_least_lower_inside(self):
        d, p = 40, 6
        zg = interval_grid(bound_constants(d).bias_interval_end)
        lower, upper, _ = variance_bounds(d, p, zg)
        assert np.all(upper >= lower - 1e-12)

    def test_lower_unclamped_can_be_negative(self):
        lower, _, _ = variance_bounds(30, 1, 2.5)
        assert lower < 0.0


class TestDominance:
    def test_interval_values(self):
        assert variance_dominance_interval(2) == 1.0
        assert variance_dominance_interval(16) == pytest.approx(8.0**0.75, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 32])
    @pytest.mark.parametrize("p", [1, 4, 16])
    def test_orf_below_rff_on_interval(self, d, p):
        zg = interval_grid(variance_dominance_interval(d))
        assert np.all(orf_variance_grid(d, p, zg) <= rff_variance(p, zg) + 1e-12)

    def test_nonnegativity_full_sweep(self):
        worst = np.inf
        for d in range(2, 301):
            zg = np.arange(0.0, 3.0 * math.sqrt(d), min(0.01, 3.0 * math.sqrt(d) / 1000.0))
            for p in (1, 2, 8, 64):
                worst = min(worst, float(orf_variance_grid(d, p, zg).min()))
        assert worst >= -1e-12


class TestInequalities:
    @settings(max_examples=60, deadline=None, derandomize=True)
    @given(
        st.integers(min_value=2, max_value=60),
        st.floats(min_value=0.0, max_value=30.0),
        st.floats(min_value=0.0, max_value=30.0),
    )
    def test_neuman_inequality(self, d, x, y):
        jx, jy = normalized_bessel(d, x), normalized_bessel(d, y)
        jsum = normalized_bessel(d, x + y)
        jdiff = normalized_bessel(d, abs(x - y))
        assert (jx + jy) ** 2 <= (1 + jsum) * (1 + jdiff) + 1e-10

    @pytest.mark.parametrize("d", [2, 17])
    def test_cross_covariance_nonpositive(self, d):
        a1 = first_zero(d)
        zg = np.arange(0.0, a1 / math.sqrt(2.0), 0.005)
        gap = orf_bias_grid(d, math.sqrt(2.0) * zg) - orf_bias_grid(d, zg) ** 2
        assert np.all(gap <= 1e-12)

    @pytest.mark.parametrize("d", [2, 17])
    def test_double_argument_inequality(self, d):
        a1 = first_zero(d)
        zg = np.arange(0.0, a1 / 2.0, 0.005)
        gap = orf_bias_grid(d, 2.0 * zg) - orf_bias_grid(d, zg) ** 4
        assert np.all(gap <= 1e-12)


class TestSummary:
    def test_fields(self):
        s = closed_form_summary(ORF, 6, 3, 1.5)
        assert (s.estimator, s.d, s.p, s.z) == (ORF, 6, 3, 1.5)
        assert s.bias == orf_bias(6, 1.5)
        assert s.variance == orf_variance(6, 3, 1.5)
        assert -1.0 <= s.bias <= 1.0 and s.variance >= 0.0
        r = closed_form_summary(RFF, 6, 3, 1.5)
        assert (r.bias, r.variance) == (rff_bias(1.5), rff_variance(3, 1.5))

    def test_rejects_unknown_estimator(self):
        with pytest.raises(InvalidArgumentError):
            closed_form_summary("srf", 4, 2, 1.0)

    @pytest.mark.parametrize("p", [0, -2, 1.5])
    def test_rejects_bad_p(self, p):
        with pytest.raises(InvalidArgumentError):
            rff_variance(p, 1.0)
