"""Pairwise EPA comparison matrices and SPA evaluation glue."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .losses import ForecastSeries, common_valid_start, loss_differential
from .series import TimeSeries
from .stats import dm_test
from .subsampling import SubsampleConfig, epa_test


@dataclass(frozen=True)
class PairwiseReport:
    """All-pairs EPA comparison: row method minus column method.

    A negative statistic means the row method has the smaller average
    loss.  Statistics are exactly antisymmetric and the subsampled
    critical interval of (j, i) is the negated, swapped interval of
    (i, j).  Pairs with an identically zero loss differential are
    flagged degenerate, not rejected.
    """

    methods: tuple[str, ...]
    n: int
    tau: float
    level: float
    dm_lag: int
    block_size: int
    dm_stats: np.ndarray
    dm_reject: np.ndarray
    tn_stats: np.ndarray
    crit_lower: np.ndarray
    crit_upper: np.ndarray
    alg1_reject: np.ndarray
    degenerate: np.ndarray

    def rows(self) -> list[list]:
        """Long-format rows for CSV output."""
        out = []
        for i, row_m in enumerate(self.methods):
            for j, col_m in enumerate(self.methods):
                if i == j:
                    continue
                out.append([
                    row_m, col_m,
                    repr(float(self.tn_stats[i, j])),
                    repr(float(self.crit_lower[i, j])),
                    repr(float(self.crit_upper[i, j])),
                    int(self.alg1_reject[i, j]),
                    repr(float(self.dm_stats[i, j])),
                    int(self.dm_reject[i, j]),
                    int(self.degenerate[i, j]),
                ])
        return out

    ROW_HEADER = [
        "row_method", "col_method", "tn", "crit_lower", "crit_upper",
        "alg1_reject", "dm_stat", "dm_reject", "degenerate",
    ]


def pairwise_epa_matrix(y: TimeSeries, forecasts: list[ForecastSeries],
                        level: float = 0.05, dm_lag: int = 20,
                        block: int | None = None,
                        loss: str = "tick") -> PairwiseReport:
    """EPA tests for every ordered pair of forecast methods.

    Both the Diebold-Mariano statistic (fixed HAC lag, 20 by default) and
    the self-normalized statistic with subsampled equal-tailed critical
    values are computed on the loss differential of each pair, restricted
    to the range where every method has forecasts.
    """
    if len(forecasts) < 2:
        raise ValueError(f"need at least 2 methods, got {len(forecasts)}")
    taus = {f.tau for f in forecasts}
    if loss == "tick" and len(taus) != 1:
        raise ValueError(f"forecasts mix risk levels: {sorted(taus)}")
    start = common_valid_start(forecasts)
    target = TimeSeries(y.values[start:])
    trimmed = [
        ForecastSeries(f.method, f.values[start:], f.tau) for f in forecasts
    ]
    m = len(trimmed)
    n = len(target)
    cfg = SubsampleConfig(block=block, level=level)

    dm_stats = np.zeros((m, m))
    dm_rej = np.zeros((m, m), dtype=bool)
    tn_stats = np.zeros((m, m))
    crit_lo = np.zeros((m, m))
    crit_hi = np.zeros((m, m))
    alg1_rej = np.zeros((m, m), dtype=bool)
    degenerate = np.zeros((m, m), dtype=bool)
    block_used = 0

    for i in range(m):
        for j in range(i + 1, m):
            diff = loss_differential(target, trimmed[i], trimmed[j], loss=loss)
            if not diff.values.any():
                degenerate[i, j] = degenerate[j, i] = True
                continue
            dm = dm_test(diff, level=level, lag=dm_lag)
            sub = epa_test(diff, cfg)
            block_used = sub.block_size
            dm_stats[i, j], dm_stats[j, i] = dm.statistic, -dm.statistic
            dm_rej[i, j] = dm_rej[j, i] = dm.reject
            tn_stats[i, j], tn_stats[j, i] = sub.statistic, -sub.statistic
            crit_lo[i, j], crit_hi[i, j] = sub.critical_lower, sub.critical_upper
            crit_lo[j, i], crit_hi[j, i] = -sub.critical_upper, -sub.critical_lower
            alg1_rej[i, j] = alg1_rej[j, i] = sub.reject

    return PairwiseReport(
        methods=tuple(f.method for f in trimmed),
        n=n,
        tau=trimmed[0].tau,
        level=level,
        dm_lag=dm_lag,
        block_size=block_used,
        dm_stats=dm_stats,
        dm_reject=dm_rej,
        tn_stats=tn_stats,
        crit_lower=crit_lo,
        crit_upper=crit_hi,
        alg1_reject=alg1_rej,
        degenerate=degenerate,
    )


def spa_loss_matrix(y: TimeSeries, forecasts: list[ForecastSeries],
                    benchmark: str, loss: str = "tick"):
    """Loss-differential matrix (benchmark minus competitor per column).

    Column j is positive when the benchmark loses more than competitor j,
    so large SPA statistics speak against the benchmark's superiority.
    """
    names = [f.method for f in forecasts]
    if benchmark not in names:
        raise ValueError(f"benchmark {benchmark!r} not among methods {names}")
    start = common_valid_start(forecasts)
    target = TimeSeries(y.values[start:])
    trimmed = {f.method: ForecastSeries(f.method, f.values[start:], f.tau)
               for f in forecasts}
    bench = trimmed[benchmark]
    competitors = [name for name in names if name != benchmark]
    if not competitors:
        raise ValueError("no competitors besides the benchmark")
    cols = [
        loss_differential(target, bench, trimmed[name], loss=loss).values
        for name in competitors
    ]
    return np.column_stack(cols), competitors
