"""Pairwise EPA matrices and the SPA loss matrix construction."""

import numpy as np
import pytest

from tailtest.evaluate import pairwise_epa_matrix, spa_loss_matrix
from tailtest.losses import ForecastSeries, rw_quantile_forecast
from tailtest.rng import RngStream
from tailtest.series import TimeSeries
from tailtest.subsampling import spa_test


def _setup(n=3000, seed=900, shift=0.0):
    """Returns plus two noisy quantile forecasts; f2 is biased away from
    the true quantile so its tick loss is stochastically larger."""
    gen = RngStream(seed).generator()
    y = TimeSeries(gen.standard_normal(n))
    true_q = -1.6448536269514722  # 5% quantile of N(0,1)
    f1 = ForecastSeries("sharp", true_q + 0.05 * gen.standard_normal(n), 0.05)
    f2 = ForecastSeries("blunt", true_q - shift + 0.05 * gen.standard_normal(n), 0.05)
    return y, [f1, f2]


class TestPairwiseMatrix:
    def test_antisymmetry_exact(self):
        y, forecasts = _setup()
        report = pairwise_epa_matrix(y, forecasts)
        assert report.tn_stats[0, 1] == -report.tn_stats[1, 0]
        assert report.dm_stats[0, 1] == -report.dm_stats[1, 0]
        assert report.crit_lower[1, 0] == -report.crit_upper[0, 1]
        assert report.crit_upper[1, 0] == -report.crit_lower[0, 1]

    def test_identical_forecasts_flagged_degenerate(self):
        y, forecasts = _setup()
        twin = ForecastSeries("twin", forecasts[0].values.copy(), 0.05)
        report = pairwise_epa_matrix(y, [forecasts[0], twin])
        assert report.degenerate[0, 1]
        assert not report.alg1_reject[0, 1]
        assert not report.dm_reject[0, 1]

    def test_dominated_method_rejected_with_correct_sign(self):
        y, forecasts = _setup(shift=1.0)
        report = pairwise_epa_matrix(y, forecasts)
        # row "sharp" minus column "blunt": sharp loses less -> negative stat
        assert report.tn_stats[0, 1] < 0
        assert report.dm_stats[0, 1] < 0
        assert report.dm_reject[0, 1]
        assert report.alg1_reject[0, 1]

    def test_mixed_availability_trims_to_common_range(self):
        gen = RngStream(901).generator()
        y = TimeSeries(gen.standard_normal(2000))
        rw = rw_quantile_forecast(y, 250, 0.05)
        flat = ForecastSeries("flat", np.full(2000, -1.6), 0.05)
        report = pairwise_epa_matrix(y, [rw, flat])
        assert report.n == 2000 - 250

    def test_needs_two_methods(self):
        y, forecasts = _setup()
        with pytest.raises(ValueError, match="at least 2"):
            pairwise_epa_matrix(y, forecasts[:1])

    def test_rows_schema(self):
        y, forecasts = _setup()
        report = pairwise_epa_matrix(y, forecasts)
        rows = report.rows()
        assert len(rows) == 2
        assert len(rows[0]) == len(report.ROW_HEADER)


class TestSpaMatrix:
    def test_benchmark_column_signs(self):
        y, forecasts = _setup(shift=1.0)
        matrix, competitors = spa_loss_matrix(y, forecasts, "blunt")
        assert competitors == ["sharp"]
        # benchmark minus competitor: blunt loses more, so positive mean
        assert matrix.mean() > 0
        assert spa_test(matrix).reject

    def test_superior_benchmark_not_rejected(self):
        y, forecasts = _setup(shift=1.0)
        matrix, _ = spa_loss_matrix(y, forecasts, "sharp")
        assert not spa_test(matrix).reject

    def test_unknown_benchmark(self):
        y, forecasts = _setup()
        with pytest.raises(ValueError, match="not among"):
            spa_loss_matrix(y, forecasts, "oracle")
