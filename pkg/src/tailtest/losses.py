"""Forecast-evaluation inputs: losses, loss differentials and VaR forecasters.

Two forecast families are computed natively: rolling-window empirical
quantiles and a Gaussian GARCH(1,1).  Anything fancier is expected to be
produced elsewhere and ingested from CSV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import ndtri

from . import backend
from .series import TimeSeries, as_values


class EstimationError(RuntimeError):
    """Raised when a model fit fails; carries the optimizer trace."""

    def __init__(self, message: str, trace: object = None):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class ForecastSeries:
    """Quantile forecasts aligned so that index t predicts observation t.

    Entries may be NaN where the method has no forecast yet (e.g. the
    first H positions of a rolling window); ``first_valid`` marks where
    the usable range starts.
    """

    method: str
    values: np.ndarray
    tau: float

    def __post_init__(self) -> None:
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must be in (0, 1), got {self.tau}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError(f"expected 1-d forecasts, got shape {values.shape}")
        if np.isinf(values).any():
            raise ValueError("forecast values must be finite or NaN")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def first_valid(self) -> int:
        finite = np.isfinite(self.values)
        if not finite.any():
            raise ValueError(f"forecast series {self.method!r} has no finite values")
        return int(np.argmax(finite))


def tick_loss(y, q, tau: float):
    """Tick (pinball) loss (tau - 1{y - q < 0}) * (y - q); non-negative,
    zero exactly when y = q.  Accepts scalars or arrays."""
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    e = np.asarray(y, dtype=np.float64) - np.asarray(q, dtype=np.float64)
    out = (tau - (e < 0.0)) * e
    return float(out) if out.ndim == 0 else out


def squared_loss(y, q):
    """Squared error loss (y - q)^2."""
    e = np.asarray(y, dtype=np.float64) - np.asarray(q, dtype=np.float64)
    out = e * e
    return float(out) if out.ndim == 0 else out


def loss_differential(y: TimeSeries, f1: ForecastSeries, f2: ForecastSeries,
                      loss: str = "tick") -> TimeSeries:
    """Per-period loss of forecast 1 minus loss of forecast 2.

    Requires equal lengths and fully available forecasts; slice all three
    to a common valid range first (see ``common_valid_start``).
    """
    target = as_values(y)
    if len(f1) != target.size or len(f2) != target.size:
        raise ValueError(
            f"length mismatch: target {target.size}, forecasts {len(f1)} and {len(f2)}"
        )
    for f in (f1, f2):
        if not np.isfinite(f.values).all():
            raise ValueError(
                f"forecast series {f.method!r} has unavailable entries; "
                "restrict to its valid range first"
            )
    if loss == "tick":
        if f1.tau != f2.tau:
            raise ValueError(f"tau mismatch: {f1.tau} vs {f2.tau}")
        d = tick_loss(target, f1.values, f1.tau) - tick_loss(target, f2.values, f2.tau)
    elif loss == "squared":
        d = squared_loss(target, f1.values) - squared_loss(target, f2.values)
    else:
        raise ValueError(f"unknown loss {loss!r}; expected 'tick' or 'squared'")
    return TimeSeries(d)


def common_valid_start(forecasts) -> int:
    """First index where every forecast series is available."""
    return max(f.first_valid for f in forecasts)


def empirical_quantile_value(window: np.ndarray, tau: float) -> float:
    """Lower empirical quantile: smallest x with empirical CDF >= tau."""
    k = math.ceil(tau * window.size)
    return float(np.partition(window, max(k, 1) - 1)[max(k, 1) - 1])


def rw_quantile_forecast(returns: TimeSeries, window: int, tau: float) -> ForecastSeries:
    """Rolling-window empirical-quantile forecast.

    The forecast for time t is the lower empirical tau-quantile of the
    previous ``window`` observations; the first ``window`` positions are
    unavailable (NaN).
    """
    values = as_values(returns)
    n = values.size
    if window < 1 or window >= n:
        raise ValueError(f"window {window} must be in [1, n) for n={n}")
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    k = max(math.ceil(tau * window), 1)
    slabs = np.lib.stride_tricks.sliding_window_view(values, window)[:-1]
    ordered = np.partition(slabs, k - 1, axis=1)[:, k - 1]
    out = np.full(n, np.nan)
    out[window:] = ordered
    return ForecastSeries(method=f"RW-{window}", values=out, tau=tau)


@dataclass(frozen=True)
class Garch11Params:
    """GARCH(1,1) with constant conditional mean.

    sigma2[t] = omega + alpha * (y[t-1] - mu)^2 + beta * sigma2[t-1],
    covariance-stationary when alpha + beta < 1.
    """

    mu: float
    omega: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("alpha and beta must be non-negative")
        if not self.alpha + self.beta < 1.0:
            raise ValueError(
                f"alpha + beta = {self.alpha + self.beta} must be below 1"
            )


def garch_filter(params: Garch11Params, returns, s2_init: float | None = None) -> np.ndarray:
    """Conditional variance path; sigma2[0] defaults to the sample variance."""
    values = as_values(returns)
    eps2 = (values - params.mu) ** 2
    if s2_init is None:
        s2_init = float(values.var())
    if s2_init <= 0.0:
        raise ValueError("initial variance must be positive")
    return backend.garch_sigma2(eps2, params.omega, params.alpha, params.beta, s2_init)


def _unpack(theta: np.ndarray) -> tuple[float, float, float, float]:
    mu, log_omega, a, b = theta
    ea, eb = math.exp(a), math.exp(b)
    denom = 1.0 + ea + eb
    return mu, math.exp(log_omega), ea / denom, eb / denom


def fit_garch11(returns, max_iter: int = 5000) -> Garch11Params:
    """Gaussian quasi-maximum-likelihood fit of the GARCH(1,1).

    Derivative-free simplex search on a reparameterized space (omega > 0
    through a log, alpha and beta on the open unit simplex through a
    softmax), started from a variance-targeted point.  Raises
    EstimationError with the optimizer trace on failure.
    """
    values = as_values(returns)
    n = values.size
    if n < 250:
        raise EstimationError(f"need at least 250 observations, got {n}")
    sample_var = float(values.var())
    if sample_var <= 0.0:
        raise EstimationError("degenerate returns: sample variance is zero")

    alpha0, beta0 = 0.05, 0.90
    start = np.array([
        float(values.mean()),
        math.log(sample_var * (1.0 - alpha0 - beta0)),
        math.log(alpha0 / (1.0 - alpha0 - beta0)),
        math.log(beta0 / (1.0 - alpha0 - beta0)),
    ])

    def negloglik(theta: np.ndarray) -> float:
        mu, omega, alpha, beta = _unpack(theta)
        eps2 = (values - mu) ** 2
        sigma2 = backend.garch_sigma2(eps2, omega, alpha, beta, sample_var)
        if not np.isfinite(sigma2).all() or (sigma2 <= 0.0).any():
            return np.inf
        return 0.5 * float(np.sum(np.log(sigma2) + eps2 / sigma2))

    res = minimize(
        negloglik,
        start,
        method="Nelder-Mead",
        options={"maxiter": max_iter, "xatol": 1e-8, "fatol": 1e-10},
    )
    if not res.success or not np.isfinite(res.fun):
        raise EstimationError(
            f"GARCH fit did not converge after {res.nit} iterations: {res.message}",
            trace=res,
        )
    mu, omega, alpha, beta = _unpack(res.x)
    return Garch11Params(mu=mu, omega=omega, alpha=alpha, beta=beta)


def garch_var_forecast(params: Garch11Params, returns: TimeSeries, tau: float,
                       s2_init: float | None = None) -> ForecastSeries:
    """VaR forecasts mu + z_tau * sigma_t from the GARCH variance filter.

    Parameters stay fixed over the whole sample; index t uses only
    information through t-1 (sigma2[0] is the initialization).
    """
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    sigma2 = garch_filter(params, returns, s2_init=s2_init)
    q = params.mu + float(ndtri(tau)) * np.sqrt(sigma2)
    return ForecastSeries(method="G-N", values=q, tau=tau)
