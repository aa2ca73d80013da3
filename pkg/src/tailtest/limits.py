"""Closed forms and Monte Carlo machinery for the heavy-tail limit theory.

Covers the AR(1) spectral tail path, the moments of the limiting
statistic ratio, the stable scale/skewness of the limit numerator, the
HAC scaling factor, and the tail diagnostics (Hill estimator, tail
balance, normalizing sequence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import RngStream, _as_generator, gamma_fn
from .series import as_values

PATH_TRUNCATION = 1e-12


def ar1_limit_mean(kappa: float, phi: float, p_plus: float) -> float:
    """Mean of the limiting statistic ratio for a heavy-tailed AR(1).

    (p_+ - p_-) * sqrt((1+phi)/(1-phi)) * Gamma((1-kappa)/2)
                / (sqrt(pi) * Gamma(1 - kappa/2)),  for kappa in (1, 2).
    """
    _check_ar1_args(kappa, phi, p_plus)
    spread = 2.0 * p_plus - 1.0
    return (
        spread
        * math.sqrt((1.0 + phi) / (1.0 - phi))
        * gamma_fn((1.0 - kappa) / 2.0)
        / (math.sqrt(math.pi) * gamma_fn(1.0 - kappa / 2.0))
    )


def ar1_limit_second_moment(kappa: float, phi: float, p_plus: float) -> float:
    """Second moment of the limiting statistic ratio for the AR(1).

    ((1+phi)/(1-phi)) * (1 + (p_+ - p_-)^2 * (kappa/2)
                             * (Gamma((1-kappa)/2) / Gamma(1-kappa/2))^2).
    The gamma ratio enters squared; the unsquared variant would put the
    second moment below the squared mean for strongly skewed tails.
    """
    _check_ar1_args(kappa, phi, p_plus)
    spread = 2.0 * p_plus - 1.0
    ratio = gamma_fn((1.0 - kappa) / 2.0) / gamma_fn(1.0 - kappa / 2.0)
    return ((1.0 + phi) / (1.0 - phi)) * (
        1.0 + spread * spread * (kappa / 2.0) * ratio * ratio
    )


def _check_ar1_args(kappa: float, phi: float, p_plus: float) -> None:
    if not 1.0 < kappa < 2.0:
        raise ValueError(f"kappa must be in (1, 2), got {kappa}")
    if not 0.0 <= phi < 1.0:
        raise ValueError(f"phi must be in [0, 1), got {phi}")
    if not 0.0 <= p_plus <= 1.0:
        raise ValueError(f"p_plus must be in [0, 1], got {p_plus}")


def hac_limit_factor(phi: float, weights) -> float:
    """Scaling (1 + 2 * sum_j w_j phi^j)^(-1/2) linking the fixed-weight
    HAC statistic's limit to the self-normalized one."""
    w = np.asarray(weights, dtype=np.float64)
    radicand = 1.0 + 2.0 * float(np.sum(w * phi ** np.arange(1, w.size + 1)))
    if radicand <= 0.0:
        raise ValueError(f"non-positive radicand {radicand}; weights too negative")
    return radicand ** -0.5


def stable_sum_coefficient(kappa: float) -> float:
    """c_kappa = Gamma(2-kappa) * cos(kappa*pi/2) / (1-kappa), kappa != 1."""
    if kappa == 1.0:
        raise ValueError("coefficient has a removable singularity at kappa=1")
    return gamma_fn(2.0 - kappa) * math.cos(kappa * math.pi / 2.0) / (1.0 - kappa)


def default_horizon(kappa: float, phi: float) -> int:
    """Smallest horizon h with phi^(kappa*h) below the truncation level."""
    if phi == 0.0:
        return 1
    return int(math.ceil(math.log(PATH_TRUNCATION) / (kappa * math.log(phi))))


@dataclass(frozen=True)
class SpectralTailPath:
    """One realized spectral tail path of the AR(1).

    The path is theta0 * phi^t for t >= -j and zero before, truncated at
    ``times[-1]``; ``q`` renormalizes it so the kappa-th powers sum to 1.
    """

    kappa: float
    phi: float
    theta0: int
    j: int
    times: np.ndarray
    theta: np.ndarray

    @property
    def q(self) -> np.ndarray:
        norm = float(np.sum(np.abs(self.theta) ** self.kappa)) ** (1.0 / self.kappa)
        return self.theta / norm


def sample_spectral_path(kappa: float, phi: float, p_plus: float, stream,
                         horizon: int | None = None) -> SpectralTailPath:
    """Draw one spectral tail path: a geometric look-back J and a sign.

    P(J = j) = phi^(kappa*j) * (1 - phi^kappa) and the sign at the center
    is +1 with probability p_plus.  ``horizon`` must be large enough that
    phi^(kappa*horizon) < 1e-12 (the default is the smallest such value).
    """
    if not 0.0 <= phi < 1.0:
        raise ValueError(f"phi must be in [0, 1), got {phi}")
    if not 0.0 <= p_plus <= 1.0:
        raise ValueError(f"p_plus must be in [0, 1], got {p_plus}")
    needed = default_horizon(kappa, phi)
    if horizon is None:
        horizon = needed
    elif horizon < needed:
        raise ValueError(
            f"horizon {horizon} too small: need at least {needed} for "
            f"phi^(kappa*h) < {PATH_TRUNCATION}"
        )
    gen = _as_generator(stream)
    j = 0 if phi == 0.0 else int(gen.geometric(1.0 - phi**kappa) - 1)
    theta0 = 1 if gen.random() < p_plus else -1
    times = np.arange(-j, horizon + 1)
    theta = theta0 * phi ** times.astype(np.float64)
    return SpectralTailPath(kappa=kappa, phi=phi, theta0=theta0, j=j,
                            times=times, theta=theta)


def stable_scale_skew_mc(kappa: float, phi: float, p_plus: float,
                         n_paths: int, stream) -> tuple[float, float]:
    """Monte Carlo estimate of the limit numerator's scale and skewness.

    Draws spectral paths, forms the normalized cluster sums S = sum_t Q_t,
    and returns (sigma, beta) with sigma^kappa = c_kappa * E|S|^kappa and
    beta = E[S_+^kappa - S_-^kappa] / E|S|^kappa.
    """
    if n_paths < 10_000:
        raise ValueError(f"need at least 10^4 paths, got {n_paths}")
    if not 0.0 <= phi < 1.0:
        raise ValueError(f"phi must be in [0, 1), got {phi}")
    gen = _as_generator(stream)
    horizon = default_horizon(kappa, phi)
    if phi == 0.0:
        j = np.zeros(n_paths)
    else:
        j = gen.geometric(1.0 - phi**kappa, size=n_paths) - 1.0
    theta0 = np.where(gen.random(n_paths) < p_plus, 1.0, -1.0)

    # truncated geometric sums over t = -J .. horizon (phi^-J cancels in Q)
    length = j + horizon + 1.0
    if phi == 0.0:
        cluster_sum = theta0
    else:
        sum_theta = (1.0 - phi**length) / (1.0 - phi)
        sum_abs_k = (1.0 - phi ** (kappa * length)) / (1.0 - phi**kappa)
        cluster_sum = theta0 * sum_theta / sum_abs_k ** (1.0 / kappa)

    abs_k = np.abs(cluster_sum) ** kappa
    signed_k = np.where(cluster_sum >= 0.0, abs_k, -abs_k)
    mean_abs = float(abs_k.mean())
    beta = float(signed_k.mean()) / mean_abs
    sigma = (stable_sum_coefficient(kappa) * mean_abs) ** (1.0 / kappa)
    return sigma, beta


def hill_estimate(x, k: int) -> float:
    """Hill tail-index estimate from the top k order statistics of |x|."""
    values = np.abs(as_values(x))
    n = values.size
    if not 2 <= k < n:
        raise ValueError(f"k must satisfy 2 <= k < n, got k={k}, n={n}")
    ordered = np.sort(values)
    anchor = ordered[n - k - 1]
    if anchor <= 0.0:
        raise ValueError(f"order statistic |x|_({n - k}) is zero; ties at zero")
    return 1.0 / float(np.mean(np.log(ordered[n - k:] / anchor)))


def hill_plot(x, k_grid=None) -> np.ndarray:
    """Hill estimates over a grid of k; returns rows (k, kappa_hat).

    Default grid: 50 log-spaced values from 10 to n // 10.
    """
    values = as_values(x)
    n = values.size
    if k_grid is None:
        if n // 10 < 10:
            raise ValueError(f"series too short for the default grid, n={n}")
        grid = np.unique(np.geomspace(10, n // 10, num=50).astype(int))
    else:
        grid = np.unique(np.asarray(k_grid, dtype=int))
    rows = [(int(k), hill_estimate(values, int(k))) for k in grid]
    return np.array(rows, dtype=np.float64)


def tail_balance_estimate(x, threshold_quantile: float = 0.99) -> float:
    """Share of positive observations among large-magnitude exceedances.

    The threshold is the empirical ``threshold_quantile`` of |x| (0.99 by
    default); estimates the right tail-balance weight p_+.
    """
    if not 0.0 < threshold_quantile < 1.0:
        raise ValueError(f"threshold quantile must be in (0, 1), got {threshold_quantile}")
    values = as_values(x)
    magnitude = np.abs(values)
    k = max(math.ceil(threshold_quantile * values.size), 1)
    threshold = np.partition(magnitude, k - 1)[k - 1]
    exceed = magnitude > threshold
    if not exceed.any():
        raise ValueError("no exceedances above the threshold")
    return float((values[exceed] > 0.0).mean())


def normalizing_sequence_estimate(x) -> float:
    """Diagnostic estimate of the tail normalizing sequence a_n.

    Uses the exclusive (1 - 1/n) empirical quantile of |x|, i.e. the
    order statistic at floor((1 - 1/n) * n) + 1, which is the sample
    maximum of the magnitudes.
    """
    values = np.abs(as_values(x))
    n = values.size
    if n < 10:
        raise ValueError(f"need at least 10 observations, got {n}")
    k = min(math.floor((1.0 - 1.0 / n) * n) + 1, n)
    return float(np.partition(values, k - 1)[k - 1])
