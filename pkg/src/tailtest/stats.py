"""Test statistics for predictive ability testing.

The self-normalized statistic divides the sum by the root sum of squares,
so numerator and denominator share the same stochastic order no matter
how heavy the tails are.  Windowed versions of the statistics are served
from prefix tables at O(1) per window, which makes the full subsampling
pass O(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import ndtri

from . import backend
from .series import as_values


class TestMethod(str, Enum):
    DM = "DM"
    SELF_NORM = "SelfNorm-Subsample"
    MODIFIED_ABS = "ModifiedAbs-Subsample"
    SPA = "SPA-Subsample"


@dataclass(frozen=True)
class TestReport:
    """Outcome of a single hypothesis test.

    ``reject`` is True exactly when the statistic falls outside the
    acceptance region [critical_lower, critical_upper] (one-sided tests
    leave critical_lower as None).
    """

    statistic: float
    critical_lower: float | None
    critical_upper: float
    nominal_level: float
    reject: bool
    method: TestMethod
    block_size: int | None = None
    degenerate_windows: int = 0


@dataclass(frozen=True)
class PrefixTable:
    """Cumulative sums of x, x^2 and |x| (lengths n+1, index 0 = 0).

    Built with compensated summation so that window aggregates taken as
    prefix differences stay accurate under heavy-tailed magnitudes.
    """

    cum: np.ndarray
    cum_sq: np.ndarray
    cum_abs: np.ndarray

    @property
    def n(self) -> int:
        return int(self.cum.size - 1)

    def window_sums(self, start: int, b: int) -> tuple[float, float, float]:
        """(sum, sum of squares, sum of absolutes) of x[start:start+b]."""
        self._check_window(start, b)
        end = start + b
        return (
            float(self.cum[end] - self.cum[start]),
            float(self.cum_sq[end] - self.cum_sq[start]),
            float(self.cum_abs[end] - self.cum_abs[start]),
        )

    def _check_window(self, start: int, b: int) -> None:
        if b < 1 or start < 0 or start + b > self.n:
            raise ValueError(
                f"window [start={start}, b={b}] out of range for n={self.n}"
            )


def build_prefix(x) -> PrefixTable:
    """Prefix table for a series (TimeSeries or array)."""
    values = as_values(x)
    cum, cum_sq, cum_abs = backend.prefix_tables(np.ascontiguousarray(values))
    return PrefixTable(cum, cum_sq, cum_abs)


def window_self_norm(table: PrefixTable, start: int, b: int) -> float:
    """Self-normalized statistic on the window x[start:start+b].

    An all-zero window yields 0.0 (the degenerate convention used inside
    the subsampling loop); use ``self_norm_stat`` for full-sample checks.
    """
    s, g2, _ = table.window_sums(start, b)
    if g2 <= 0.0:
        return 0.0
    return s / math.sqrt(g2)


def window_modified(table: PrefixTable, start: int, b: int) -> float:
    """Modified statistic (mean |x| times the self-normalized one) on a window."""
    s, g2, ga = table.window_sums(start, b)
    if g2 <= 0.0:
        return 0.0
    return (ga / b) * (s / math.sqrt(g2))


def window_self_norm_all(table: PrefixTable, b: int) -> tuple[np.ndarray, int]:
    """Self-normalized statistic on every window of length b.

    Returns (statistics for start = 0..n-b, count of degenerate windows).
    """
    table._check_window(0, b)
    s = table.cum[b:] - table.cum[:-b]
    g2 = table.cum_sq[b:] - table.cum_sq[:-b]
    degenerate = g2 <= 0.0
    out = np.divide(s, np.sqrt(np.where(degenerate, 1.0, g2)))
    out[degenerate] = 0.0
    return out, int(degenerate.sum())


def window_modified_all(table: PrefixTable, b: int) -> tuple[np.ndarray, int]:
    """Modified statistic on every window of length b."""
    stats, n_deg = window_self_norm_all(table, b)
    ga = table.cum_abs[b:] - table.cum_abs[:-b]
    return (ga / b) * stats, n_deg


def _full_stat_parts(values: np.ndarray) -> tuple[float, float]:
    """(self-normalized statistic, mean absolute value) of the full sample.

    The statistic is scale-invariant, so if the squares underflow (every
    |x| below ~1e-154) it is recomputed on x / max|x|.
    """
    if values.size < 1:
        raise ValueError("empty series")
    table = build_prefix(values)
    s, g2, ga = table.window_sums(0, table.n)
    if g2 > 0.0:
        return s / math.sqrt(g2), ga / table.n
    peak = float(np.abs(values).max())
    if peak == 0.0:
        raise ValueError("statistic undefined: series is identically zero")
    rescaled = build_prefix(values / peak)
    s, g2, _ = rescaled.window_sums(0, table.n)
    return s / math.sqrt(g2), ga / table.n


def self_norm_stat(x) -> float:
    """Full-sample self-normalized statistic sum(x) / sqrt(sum(x^2))."""
    return _full_stat_parts(as_values(x))[0]


def modified_stat(x) -> float:
    """Modified statistic (mean absolute value) * sum(x) / sqrt(sum(x^2)).

    Unlike the self-normalized statistic it is degree-1 homogeneous, which
    restores power against alternatives where the mean does not exist.
    """
    t, mean_abs = _full_stat_parts(as_values(x))
    return mean_abs * t


def bartlett_weights(q: int) -> np.ndarray:
    """Bartlett kernel weights w_j = 1 - j/(q+1) for j = 1..q."""
    if q < 0:
        raise ValueError(f"lag order must be non-negative, got {q}")
    j = np.arange(1, q + 1, dtype=np.float64)
    return 1.0 - j / (q + 1.0)


def hac_variance(x, q: int, weights: np.ndarray | None = None,
                 center: bool = True) -> float:
    """Long-run variance estimate gamma_0 + 2 * sum_j w_j * gamma_j.

    Autocovariances use divisor n and are centered at the sample mean
    when ``center`` is set (the Diebold-Mariano convention); the
    fixed-weight variant of the theory is uncentered.  Bartlett weights
    (the default) guarantee a non-negative estimate; with arbitrary
    weights a negative estimate raises.
    """
    values = as_values(x)
    n = values.size
    if q >= n:
        raise ValueError(f"lag order q={q} must be smaller than n={n}")
    w = bartlett_weights(q) if weights is None else np.asarray(weights, dtype=np.float64)
    if w.size != q:
        raise ValueError(f"expected {q} weights, got {w.size}")
    xc = values - values.mean() if center else values
    est = float(xc @ xc) / n
    for j in range(1, q + 1):
        est += 2.0 * w[j - 1] * float(xc[:-j] @ xc[j:]) / n
    if est < 0.0:
        raise ValueError(f"negative long-run variance estimate ({est}); "
                         "non-Bartlett weights do not guarantee positivity")
    return est


def dm_auto_lag(n: int) -> int:
    """Newey-West style automatic lag length floor(4 * (n/100)^(2/9))."""
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def dm_statistic(x, lag: int | str = "auto") -> float:
    """Diebold-Mariano statistic: sum(x) / (sqrt(n) * HAC standard error)."""
    values = as_values(x)
    n = values.size
    q = dm_auto_lag(n) if lag == "auto" else int(lag)
    if q >= n:
        raise ValueError(f"lag {q} must be smaller than n={n}")
    sigma2 = hac_variance(values, q, center=True)
    if sigma2 <= 0.0:
        raise ValueError("zero HAC variance estimate; statistic undefined")
    return float(values.sum()) / math.sqrt(n * sigma2)


def dm_test(x, level: float = 0.05, lag: int | str = "auto") -> TestReport:
    """Two-sided Diebold-Mariano test against standard normal critical values."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"nominal level must be in (0, 1), got {level}")
    stat = dm_statistic(x, lag=lag)
    crit = float(ndtri(1.0 - level / 2.0))
    return TestReport(
        statistic=stat,
        critical_lower=-crit,
        critical_upper=crit,
        nominal_level=level,
        reject=abs(stat) > crit,
        method=TestMethod.DM,
    )


def spa_statistic(x_matrix) -> float:
    """Superior-predictive-ability statistic on an n x m loss-differential matrix.

    All columns share one normalization, the root of the total sum of
    squares over every entry; the statistic is the positive part of the
    largest normalized column sum.
    """
    mat = np.asarray(x_matrix, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
        raise ValueError(f"expected a non-empty n x m matrix, got shape {mat.shape}")
    if not np.isfinite(mat).all():
        raise ValueError("matrix contains non-finite values")
    col_sums = mat.sum(axis=0)
    gamma2 = float((mat * mat).sum())
    if gamma2 <= 0.0:
        raise ValueError("statistic undefined: matrix is identically zero")
    return max(float(col_sums.max()) / math.sqrt(gamma2), 0.0)
