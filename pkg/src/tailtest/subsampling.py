"""Subsampling-based critical values for the self-normalized tests.

Critical values come from the empirical distribution of the statistic
over all overlapping windows of length b (maximal overlap, q = n - b + 1
windows).  The default block rule is b = floor(1.5 * sqrt(n)).  Nothing
here requires an estimate of the tail index or of a long-run variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import as_values
from .stats import (
    PrefixTable,
    TestMethod,
    TestReport,
    build_prefix,
    window_modified_all,
    window_self_norm_all,
)


@dataclass(frozen=True)
class SubsampleConfig:
    """Tuning for a subsampled test: block override and nominal level."""

    block: int | None = None
    level: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"nominal level must be in (0, 1), got {self.level}")
        if self.block is not None and self.block < 2:
            raise ValueError(f"block must be at least 2, got {self.block}")


@dataclass(frozen=True)
class SubsampleDistribution:
    """Sorted subsample statistics plus the bookkeeping that defines them."""

    stats: np.ndarray
    n: int
    b: int
    kind: str

    def __post_init__(self) -> None:
        if self.stats.size != self.q_n:
            raise ValueError(
                f"got {self.stats.size} statistics, expected q_n = {self.q_n}"
            )

    @property
    def q_n(self) -> int:
        return self.n - self.b + 1


def default_block(n: int) -> int:
    """Block rule b = floor(1.5 * sqrt(n)), clamped to [2, n-1]."""
    if n < 5:
        raise ValueError(f"need n >= 5 for a meaningful block, got {n}")
    b = int(math.floor(1.5 * math.sqrt(n)))
    return max(2, min(b, n - 1))


def empirical_quantile(dist: SubsampleDistribution, y: float) -> float:
    """Lower empirical quantile inf{x : fraction of stats <= x is >= y}."""
    if not 0.0 < y <= 1.0:
        raise ValueError(f"quantile level must be in (0, 1], got {y}")
    k = math.ceil(y * dist.q_n)
    return float(dist.stats[max(k, 1) - 1])


def _resolve_block(n: int, cfg: SubsampleConfig) -> int:
    b = cfg.block if cfg.block is not None else default_block(n)
    if not 1 < b < n:
        raise ValueError(f"block b={b} must satisfy 1 < b < n={n}")
    return b


def _full_sample(table: PrefixTable) -> tuple[float, float, float]:
    s, g2, ga = table.window_sums(0, table.n)
    if g2 <= 0.0:
        raise ValueError("degenerate sample: series is identically zero")
    return s, g2, ga


def epa_test(x, cfg: SubsampleConfig | None = None,
             alternative: str = "equal-tailed") -> TestReport:
    """Self-normalized test for a zero mean with subsampled critical values.

    ``alternative`` selects the decision rule on the same subsample
    distribution: "equal-tailed" (the default two-sided test), "symmetric"
    (|T| against the 1-eta quantile of |T_windows|), or the one-sided
    "greater" / "less".
    """
    cfg = cfg or SubsampleConfig()
    values = as_values(x)
    n = values.size
    b = _resolve_block(n, cfg)
    table = build_prefix(values)
    s, g2, _ = _full_sample(table)
    t_n = s / math.sqrt(g2)
    window_stats, n_degenerate = window_self_norm_all(table, b)
    eta = cfg.level

    if alternative == "equal-tailed":
        dist = SubsampleDistribution(np.sort(window_stats), n, b, "self-norm")
        lo = empirical_quantile(dist, eta / 2.0)
        hi = empirical_quantile(dist, 1.0 - eta / 2.0)
        reject = not (lo <= t_n <= hi)
    elif alternative == "symmetric":
        dist = SubsampleDistribution(np.sort(np.abs(window_stats)), n, b, "abs-self-norm")
        hi = empirical_quantile(dist, 1.0 - eta)
        lo = -hi
        reject = abs(t_n) > hi
    elif alternative == "greater":
        dist = SubsampleDistribution(np.sort(window_stats), n, b, "self-norm")
        hi = empirical_quantile(dist, 1.0 - eta)
        lo = None
        reject = t_n > hi
    elif alternative == "less":
        dist = SubsampleDistribution(np.sort(window_stats), n, b, "self-norm")
        lo = empirical_quantile(dist, eta)
        hi = math.inf
        reject = t_n < lo
    else:
        raise ValueError(f"unknown alternative: {alternative!r}")

    return TestReport(
        statistic=t_n,
        critical_lower=lo,
        critical_upper=hi,
        nominal_level=eta,
        reject=reject,
        method=TestMethod.SELF_NORM,
        block_size=b,
        degenerate_windows=n_degenerate,
    )


def abs_test(x, cfg: SubsampleConfig | None = None) -> TestReport:
    """Symmetric test on the modified statistic.

    Rejects when |T_modified| exceeds the (1-eta) empirical quantile of
    the absolute windowed statistics.  Unlike ``epa_test`` this remains
    consistent against alternatives where the mean does not exist.
    """
    cfg = cfg or SubsampleConfig()
    values = as_values(x)
    n = values.size
    b = _resolve_block(n, cfg)
    table = build_prefix(values)
    s, g2, ga = _full_sample(table)
    t_mod = (ga / n) * s / math.sqrt(g2)
    window_stats, n_degenerate = window_modified_all(table, b)
    dist = SubsampleDistribution(np.sort(np.abs(window_stats)), n, b, "abs-modified")
    hi = empirical_quantile(dist, 1.0 - cfg.level)
    return TestReport(
        statistic=t_mod,
        critical_lower=-hi,
        critical_upper=hi,
        nominal_level=cfg.level,
        reject=abs(t_mod) > hi,
        method=TestMethod.MODIFIED_ABS,
        block_size=b,
        degenerate_windows=n_degenerate,
    )


@dataclass(frozen=True)
class ConfidenceInterval:
    """Equal-tailed subsampling confidence interval for the mean."""

    lower: float
    upper: float
    level: float
    block_size: int
    degenerate: bool = False
    degenerate_windows: int = 0


def mean_confidence_interval(x, cfg: SubsampleConfig | None = None) -> ConfidenceInterval:
    """Equal-tailed two-sided confidence interval for the series mean.

    Uses mean-centered subsample statistics; the interval is the sample
    mean shifted by (gamma_n / n) times their eta/2 and 1 - eta/2
    empirical quantiles.  If the quantile estimates invert on a tiny
    window count, the endpoints are re-ordered and flagged degenerate.
    """
    cfg = cfg or SubsampleConfig()
    values = as_values(x)
    n = values.size
    b = _resolve_block(n, cfg)
    table = build_prefix(values)
    _, g2, _ = _full_sample(table)
    mean = float(values.mean())

    # centered window sums from the same prefix table
    s = table.cum[b:] - table.cum[:-b]
    q2 = table.cum_sq[b:] - table.cum_sq[:-b]
    s_c = s - b * mean
    g2_c = q2 - 2.0 * mean * s + b * mean * mean
    degenerate_w = g2_c <= 0.0
    t_c = np.divide(s_c, np.sqrt(np.where(degenerate_w, 1.0, g2_c)))
    t_c[degenerate_w] = 0.0

    dist = SubsampleDistribution(np.sort(t_c), n, b, "centered-self-norm")
    scale = math.sqrt(g2) / n
    lo = mean + scale * empirical_quantile(dist, cfg.level / 2.0)
    hi = mean + scale * empirical_quantile(dist, 1.0 - cfg.level / 2.0)
    degenerate = lo > hi
    if degenerate:
        lo, hi = hi, lo
    return ConfidenceInterval(
        lower=lo,
        upper=hi,
        level=cfg.level,
        block_size=b,
        degenerate=degenerate,
        degenerate_windows=int(degenerate_w.sum()),
    )


def spa_test(x_matrix, cfg: SubsampleConfig | None = None) -> TestReport:
    """One-sided subsampled test of superior predictive ability.

    ``x_matrix`` holds loss differentials benchmark-minus-competitor in
    columns.  Rejects the composite null (no competitor beats the
    benchmark in expectation) when the SPA statistic exceeds the (1-eta)
    empirical quantile of its windowed versions.
    """
    cfg = cfg or SubsampleConfig()
    mat = np.asarray(x_matrix, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[1] < 1:
        raise ValueError(f"expected an n x m matrix, got shape {mat.shape}")
    if not np.isfinite(mat).all():
        raise ValueError("matrix contains non-finite values")
    n, m = mat.shape
    b = _resolve_block(n, cfg)

    col_cum = np.empty((n + 1, m))
    for j in range(m):
        col_cum[:, j] = build_prefix(mat[:, j]).cum
    # running sum of squared row norms, compensated like any prefix table
    frob_sq = build_prefix(np.einsum("ij,ij->i", mat, mat)).cum

    gamma2_full = float(frob_sq[n])
    if gamma2_full <= 0.0:
        raise ValueError("degenerate matrix: all entries are zero")
    v_n = max(float(mat.sum(axis=0).max()) / math.sqrt(gamma2_full), 0.0)

    win_sums = col_cum[b:] - col_cum[:-b]
    win_gamma2 = frob_sq[b:] - frob_sq[:-b]
    degenerate_w = win_gamma2 <= 0.0
    denom = np.sqrt(np.where(degenerate_w, 1.0, win_gamma2))
    v_windows = np.maximum(win_sums.max(axis=1) / denom, 0.0)
    v_windows[degenerate_w] = 0.0

    dist = SubsampleDistribution(np.sort(v_windows), n, b, "spa")
    hi = empirical_quantile(dist, 1.0 - cfg.level)
    return TestReport(
        statistic=v_n,
        critical_lower=None,
        critical_upper=hi,
        nominal_level=cfg.level,
        reject=v_n > hi,
        method=TestMethod.SPA,
        block_size=b,
        degenerate_windows=int(degenerate_w.sum()),
    )
