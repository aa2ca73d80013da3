"""Subsampled tests: block rule, quantiles, decision rules,小-sample smoke checks."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailtest.dgp import Ar1Spec, simulate_ar1
from tailtest.rng import NormalParams, RngStream, StableParams
from tailtest.stats import TestMethod, build_prefix, window_self_norm
from tailtest.subsampling import (
    SubsampleConfig,
    SubsampleDistribution,
    abs_test,
    default_block,
    empirical_quantile,
    epa_test,
    mean_confidence_interval,
    spa_test,
)


class TestBlockRule:
    def test_examples(self):
        assert default_block(10_000) == 150
        assert default_block(1000) == 47
        assert default_block(9) == 4

    def test_too_small(self):
        with pytest.raises(ValueError):
            default_block(4)

    def test_clamped_inside_sample(self):
        assert 1 < default_block(5) < 5


class TestEmpiricalQuantile:
    def setup_method(self):
        self.dist = SubsampleDistribution(np.array([1.0, 2.0, 3.0, 4.0]), 7, 4, "t")

    def test_quarter(self):
        assert empirical_quantile(self.dist, 0.25) == 1.0

    def test_three_quarters(self):
        assert empirical_quantile(self.dist, 0.75) == 3.0

    def test_one_is_max(self):
        assert empirical_quantile(self.dist, 1.0) == 4.0

    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=30),
           st.floats(0.01, 1.0), st.floats(0.01, 1.0))
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_level(self, values, y1, y2):
        stats = np.sort(np.array(values))
        dist = SubsampleDistribution(stats, stats.size, 1, "t")
        lo, hi = sorted([y1, y2])
        assert empirical_quantile(dist, lo) <= empirical_quantile(dist, hi)

    def test_bookkeeping(self):
        with pytest.raises(ValueError, match="expected q_n"):
            SubsampleDistribution(np.array([1.0, 2.0]), 10, 4, "t")


class TestEpa:
    def test_constant_series_rejects_any_level(self):
        x = np.full(200, 0.7)
        for level in (0.01, 0.05, 0.2):
            report = epa_test(x, SubsampleConfig(level=level))
            assert report.reject
            assert report.statistic == pytest.approx(math.sqrt(200))
            assert report.method is TestMethod.SELF_NORM

    def test_block_bookkeeping(self):
        x = np.random.default_rng(0).standard_normal(500)
        report = epa_test(x)
        table = build_prefix(x)
        b = default_block(500)
        assert report.block_size == b
        assert report.statistic == pytest.approx(window_self_norm(table, 0, 500))

    def test_scale_invariant_decision(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            x = rng.standard_t(1.5, size=400)
            base = epa_test(x)
            for c in (0.001, 7.0, 1e6):
                scaled = epa_test(c * x)
                assert scaled.reject == base.reject
                assert scaled.statistic == pytest.approx(base.statistic, rel=1e-9)

    def test_iid_normal_size_smoke(self):
        # criterion-scale version (M=2000, n=5000) lives in the acceptance
        # suite; at n=1000 the test is visibly conservative for iid data
        rejections = 0
        m = 300
        for rep in range(m):
            x = RngStream(600, rep).generator().standard_normal(1000)
            rejections += epa_test(x).reject
        assert 0.005 <= rejections / m <= 0.10

    def test_alternatives(self):
        x = np.random.default_rng(2).standard_normal(600) + 1.0
        assert epa_test(x, alternative="greater").reject
        assert not epa_test(x, alternative="less").reject
        assert epa_test(x, alternative="symmetric").reject
        with pytest.raises(ValueError, match="unknown alternative"):
            epa_test(x, alternative="both")

    def test_degenerate_sample(self):
        with pytest.raises(ValueError, match="degenerate"):
            epa_test(np.zeros(100))


class TestAbs:
    def test_constant_series_rejects(self):
        report = abs_test(np.full(300, 2.0))
        assert report.reject
        assert report.method is TestMethod.MODIFIED_ABS
        # full-sample modified statistic c*sqrt(n) dominates windows c*sqrt(b)
        assert report.statistic == pytest.approx(2.0 * math.sqrt(300))
        assert report.critical_upper == pytest.approx(
            2.0 * math.sqrt(default_block(300)))

    def test_iid_normal_size_smoke(self):
        rejections = 0
        m = 300
        for rep in range(m):
            x = RngStream(601, rep).generator().standard_normal(1000)
            rejections += abs_test(x).reject
        assert 0.01 <= rejections / m <= 0.10


class TestConfidenceInterval:
    def test_constant_series_degenerate_point(self):
        ci = mean_confidence_interval(np.full(100, 3.0))
        assert ci.lower == ci.upper == pytest.approx(3.0)
        assert ci.degenerate_windows == 100 - ci.block_size + 1

    def test_iid_normal_coverage_smoke(self):
        covered = 0
        m = 200
        for rep in range(m):
            x = RngStream(602, rep).generator().standard_normal(1000)
            ci = mean_confidence_interval(x)
            covered += ci.lower <= 0.0 <= ci.upper
        assert 0.88 <= covered / m <= 0.99

    def test_interval_ordered(self):
        x = np.random.default_rng(3).standard_t(1.5, size=500)
        ci = mean_confidence_interval(x)
        assert ci.lower <= ci.upper


class TestSpaSubsampled:
    def test_univariate_consistency_with_one_sided_epa(self):
        rng = np.random.default_rng(4)
        for shift in (0.0, 0.5):
            x = rng.standard_normal(800) + shift
            spa = spa_test(x[:, None])
            one_sided = epa_test(x, alternative="greater")
            assert spa.reject == one_sided.reject
            assert spa.statistic == pytest.approx(max(one_sided.statistic, 0.0))

    def test_power_against_positive_mean_column(self):
        rng = np.random.default_rng(5)
        mat = rng.standard_normal((2000, 3))
        mat[:, 2] += 0.5
        assert spa_test(mat).reject

    def test_null_with_negative_means_rarely_rejects(self):
        rejections = 0
        for rep in range(100):
            mat = RngStream(603, rep).generator().standard_normal((500, 3)) - 0.5
            rejections += spa_test(mat).reject
        assert rejections <= 2

    def test_degenerate_matrix(self):
        with pytest.raises(ValueError, match="degenerate"):
            spa_test(np.zeros((50, 2)))


def test_oracle_equivalence_small_samples():
    """Prefix-table subsampling distribution equals per-window recomputation."""
    rng = np.random.default_rng(6)
    for _ in range(100):
        n = int(rng.integers(20, 200))
        x = rng.standard_t(1.3, size=n)
        report = epa_test(x)
        b = report.block_size
        brute = []
        for start in range(n - b + 1):
            window = x[start:start + b]
            brute.append(window.sum() / math.sqrt((window**2).sum()))
        table = build_prefix(x)
        from tailtest.stats import window_self_norm_all

        batch, _ = window_self_norm_all(table, b)
        np.testing.assert_allclose(batch, brute, rtol=1e-9)


def test_heavy_tail_size_smoke():
    """AR(1), symmetric stable kappa=1.5: rejection near nominal (desk scale)."""
    rejections = 0
    m = 300
    for rep in range(m):
        spec = Ar1Spec(delta=0.0, phi=0.5, noise=StableParams(1.5), n=1000,
                       stream=RngStream(604, rep), burn_in=2000)
        rejections += epa_test(simulate_ar1(spec)).reject
    assert 0.02 <= rejections / m <= 0.11
