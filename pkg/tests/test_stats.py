"""Statistics: hand-computed examples, brute-force oracles, algebraic properties."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tailtest.stats import (
    bartlett_weights,
    build_prefix,
    dm_auto_lag,
    dm_statistic,
    dm_test,
    hac_variance,
    modified_stat,
    self_norm_stat,
    spa_statistic,
    window_modified,
    window_modified_all,
    window_self_norm,
    window_self_norm_all,
)

finite_series = arrays(
    np.float64,
    st.integers(min_value=1, max_value=60),
    elements=st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False),
)


class TestSelfNorm:
    def test_all_ones(self):
        assert self_norm_stat([1.0, 1.0, 1.0, 1.0]) == pytest.approx(2.0)

    def test_alternating(self):
        assert self_norm_stat([1.0, -1.0, 1.0, -1.0]) == 0.0

    def test_three_four_five(self):
        assert self_norm_stat([3.0, 4.0]) == pytest.approx(1.4)

    def test_all_zero_raises(self):
        with pytest.raises(ValueError, match="identically zero"):
            self_norm_stat([0.0, 0.0, 0.0])

    @given(finite_series)
    @settings(max_examples=200, deadline=None)
    def test_cauchy_schwarz_bound(self, x):
        if not x.any():
            return
        t = self_norm_stat(x)
        assert abs(t) <= math.sqrt(x.size) * (1 + 1e-12)

    def test_bound_attained_by_constant_series(self):
        assert self_norm_stat(np.full(9, 2.5)) == pytest.approx(3.0)

    @given(finite_series, st.sampled_from([-3.0, -1.0, 0.5, 2.0]))
    @settings(max_examples=100, deadline=None)
    def test_sign_equivariance(self, x, c):
        if not x.any():
            return
        t = self_norm_stat(x)
        assert self_norm_stat(c * x) == pytest.approx(math.copysign(1.0, c) * t, abs=1e-9)


class TestModified:
    def test_all_ones(self):
        assert modified_stat([1.0, 1.0, 1.0, 1.0]) == pytest.approx(2.0)

    def test_two_twos(self):
        assert modified_stat([2.0, 2.0]) == pytest.approx(2.0 * math.sqrt(2.0))

    def test_degree_one_homogeneity(self):
        x = np.array([0.5, -1.5, 2.0, 0.25])
        assert modified_stat(3.0 * x) == pytest.approx(3.0 * modified_stat(x))


class TestHac:
    def test_hand_computed_alternating(self):
        x = [1.0, -1.0, 1.0, -1.0]
        assert dm_auto_lag(4) == 1  # floor(4 * 0.04^(2/9)) = floor(1.95)
        # q=1, Bartlett w1 = 0.5, mean 0: gamma0 = 1, gamma1 = -3/4
        assert hac_variance(x, 1, center=True) == pytest.approx(0.25)

    def test_lag_zero_is_sample_variance(self):
        x = np.array([1.0, -1.0, 1.0, -1.0])
        assert hac_variance(x, 0) == pytest.approx(x.var())

    def test_iid_normal_long_run_variance(self):
        x = np.random.default_rng(21).standard_normal(10**5)
        assert hac_variance(x, dm_auto_lag(10**5)) == pytest.approx(1.0, abs=0.05)

    def test_bartlett_nonnegative_on_random_series(self):
        rng = np.random.default_rng(22)
        for _ in range(1000):
            x = rng.standard_t(1.2, size=rng.integers(10, 60))
            assert hac_variance(x, 3) >= 0.0

    def test_uncentered_variant(self):
        x = np.array([1.0, 2.0, 3.0])
        expected = (14.0 + 2.0 * 0.5 * 8.0) / 3.0  # raw moments, Bartlett q=1
        assert hac_variance(x, 1, center=False) == pytest.approx(expected)

    def test_negative_estimate_flagged(self):
        x = np.array([1.0, -1.0, 1.0, -1.0, 1.0, -1.0])
        with pytest.raises(ValueError, match="negative"):
            hac_variance(x, 1, weights=np.array([5.0]), center=True)

    def test_bartlett_weights(self):
        np.testing.assert_allclose(bartlett_weights(3), [0.75, 0.5, 0.25])


class TestDm:
    def test_zero_numerator(self):
        assert dm_statistic([1.0, -1.0, 1.0, -1.0]) == 0.0

    def test_auto_lag_examples(self):
        assert dm_auto_lag(100) == 4
        assert dm_auto_lag(6333) == 10

    def test_fixed_lag_override(self):
        x = np.random.default_rng(23).standard_normal(6333)
        assert dm_statistic(x, lag=20) != dm_statistic(x, lag="auto")

    def test_report_critical_values(self):
        x = np.random.default_rng(24).standard_normal(500)
        report = dm_test(x, level=0.05)
        assert report.critical_upper == pytest.approx(1.959963984540054)
        assert report.reject == (abs(report.statistic) > report.critical_upper)


class TestSpa:
    def test_positive_max(self):
        mat = np.array([[-0.2, 0.3], [-0.1, 0.4]])
        gamma = math.sqrt((mat**2).sum())
        t = mat.sum(axis=0) / gamma
        assert spa_statistic(mat) == pytest.approx(max(t.max(), 0.0))

    def test_clipped_at_zero(self):
        assert spa_statistic([[-1.0, -2.0], [-0.5, -0.1]]) == 0.0

    def test_univariate_reduction(self):
        x = np.random.default_rng(25).standard_normal(100) + 0.3
        assert spa_statistic(x[:, None]) == pytest.approx(max(self_norm_stat(x), 0.0))

    def test_zero_column_never_changes_statistic_when_not_max(self):
        rng = np.random.default_rng(26)
        mat = rng.standard_normal((50, 3)) + 0.5
        v = spa_statistic(mat)
        padded = np.column_stack([mat, np.zeros(50)])
        assert spa_statistic(padded) <= v + 1e-12

    def test_removing_argmax_never_increases(self):
        rng = np.random.default_rng(27)
        mat = rng.standard_normal((50, 3))
        mat[:, 1] += 1.0
        j = int(np.argmax(mat.sum(axis=0)))
        rest = np.delete(mat, j, axis=1)
        assert spa_statistic(rest) <= spa_statistic(mat) + 1e-12

    def test_all_zero_matrix_raises(self):
        with pytest.raises(ValueError, match="identically zero"):
            spa_statistic(np.zeros((5, 2)))


class TestPrefixWindows:
    def test_random_windows_match_brute_force(self):
        rng = np.random.default_rng(28)
        for _ in range(1000):
            n = int(rng.integers(5, 200))
            x = rng.standard_t(1.5, size=n) * 10.0 ** rng.integers(-2, 3)
            table = build_prefix(x)
            b = int(rng.integers(2, n + 1))
            start = int(rng.integers(0, n - b + 1))
            window = x[start:start + b]
            direct = window.sum() / math.sqrt((window**2).sum())
            assert window_self_norm(table, start, b) == pytest.approx(direct, rel=1e-9)
            direct_mod = (np.abs(window).mean()) * direct
            assert window_modified(table, start, b) == pytest.approx(direct_mod, rel=1e-9)

    def test_full_window_equals_full_statistic_exactly(self):
        x = np.random.default_rng(29).standard_t(2, size=123)
        table = build_prefix(x)
        assert window_self_norm(table, 0, 123) == self_norm_stat(x)
        assert window_modified(table, 0, 123) == modified_stat(x)

    def test_constant_series_window(self):
        table = build_prefix(np.full(50, 3.0))
        assert window_self_norm(table, 5, 16) == pytest.approx(4.0)  # sqrt(b)

    def test_batch_matches_scalar(self):
        x = np.random.default_rng(30).standard_normal(80)
        table = build_prefix(x)
        batch, n_deg = window_self_norm_all(table, 13)
        assert n_deg == 0
        for start in range(0, 80 - 13 + 1):
            assert batch[start] == pytest.approx(window_self_norm(table, start, 13))
        batch_mod, _ = window_modified_all(table, 13)
        for start in range(0, 80 - 13 + 1):
            assert batch_mod[start] == pytest.approx(window_modified(table, start, 13))

    def test_degenerate_window_is_zero_with_flag(self):
        x = np.concatenate([np.zeros(10), np.ones(5)])
        table = build_prefix(x)
        stats, n_deg = window_self_norm_all(table, 5)
        assert stats[0] == 0.0
        assert n_deg == 6  # windows fully inside the zero run

    def test_out_of_range_window(self):
        table = build_prefix(np.ones(10))
        with pytest.raises(ValueError, match="out of range"):
            window_self_norm(table, 8, 5)
