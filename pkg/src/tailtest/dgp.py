"""Data-generating processes: AR(1) with heavy-tailed noise and the
generic affine stochastic recurrence, both with a burn-in protocol.

The recursion always starts at a fixed value ``burn_in`` steps before the
first retained observation, and the burn-in segment is discarded.  Each
spec carries its own RngStream, so a simulation is a pure function of the
spec and embarrassingly parallel across replications.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import backend
from .rng import ConstantParams, RngStream, sample_noise
from .series import TimeSeries

DEFAULT_BURN_IN = 10_000


class SimulationError(RuntimeError):
    """Raised when a recursion produces a non-finite value.

    ``step`` is the recursion index of the first offending value, counted
    so that 0 is the first retained observation (burn-in steps are
    negative).
    """

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class Ar1Spec:
    """AR(1) recursion x[t] = delta + phi * x[t-1] + z[t]."""

    delta: float
    phi: float
    noise: object
    n: int
    stream: RngStream
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self) -> None:
        if not 0.0 <= self.phi < 1.0:
            raise ValueError(f"phi must be in [0, 1), got {self.phi}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be non-negative, got {self.burn_in}")


@dataclass(frozen=True)
class SreSpec:
    """Affine stochastic recurrence x[t] = a[t] * x[t-1] + b[t].

    ``a_noise`` and ``b_noise`` are independent noise specifications.
    Stationarity needs E[log|A|] < 0; it is checked analytically for a
    degenerate A, otherwise by a Monte Carlo estimate at construction
    (warning when inconclusive, error when clearly violated).
    """

    a_noise: object
    b_noise: object
    n: int
    stream: RngStream
    burn_in: int = DEFAULT_BURN_IN
    initial_value: float = 0.0
    check_stationarity: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be non-negative, got {self.burn_in}")
        if self.check_stationarity:
            self._assert_contracting()

    def _assert_contracting(self, draws: int = 10_000) -> None:
        if isinstance(self.a_noise, ConstantParams):
            if abs(self.a_noise.value) >= 1.0:
                raise ValueError(
                    f"|A| = {abs(self.a_noise.value)} >= 1: E[log|A|] >= 0, "
                    "no stationary solution"
                )
            return
        a = np.abs(sample_noise(self.a_noise, self.stream.generator(salt=1), draws))
        logs = np.log(a[a > 0.0])
        est = float(logs.mean())
        se = float(logs.std(ddof=1) / np.sqrt(logs.size))
        if est - 2.0 * se > 0.0:
            raise ValueError(
                f"estimated E[log|A|] = {est:.4f} (se {se:.4f}) is positive: "
                "recursion is non-stationary"
            )
        if est + 2.0 * se >= 0.0:
            warnings.warn(
                f"estimated E[log|A|] = {est:.4f} is within 2 standard errors "
                "of 0; stationarity is borderline",
                stacklevel=3,
            )


class Ar1Trace(NamedTuple):
    """Simulation output with the noise retained for recursion checks."""

    series: TimeSeries
    noise: np.ndarray
    previous_value: float


def _check_finite(path: np.ndarray, burn_in: int) -> None:
    bad = ~np.isfinite(path)
    if bad.any():
        step = int(np.argmax(bad)) - burn_in
        raise SimulationError(f"non-finite value at recursion step {step}", step)


def simulate_ar1(spec: Ar1Spec, return_noise: bool = False):
    """Simulate the AR(1) recursion from x = 0, discarding the burn-in.

    Returns a TimeSeries of length ``spec.n``; with ``return_noise`` an
    Ar1Trace that also carries the retained noise draws and the value
    preceding the first retained observation.
    """
    total = spec.burn_in + spec.n
    z = np.atleast_1d(sample_noise(spec.noise, spec.stream, total))
    path = backend.ar1_path(z, spec.delta, spec.phi, 0.0)
    _check_finite(path, spec.burn_in)
    series = TimeSeries(path[spec.burn_in:])
    if not return_noise:
        return series
    prev = float(path[spec.burn_in - 1]) if spec.burn_in > 0 else 0.0
    return Ar1Trace(series, z[spec.burn_in:], prev)


def simulate_sre(spec: SreSpec, return_noise: bool = False):
    """Simulate the affine stochastic recurrence, discarding the burn-in."""
    total = spec.burn_in + spec.n
    gen = spec.stream.generator()
    a = np.atleast_1d(sample_noise(spec.a_noise, gen, total))
    b = np.atleast_1d(sample_noise(spec.b_noise, gen, total))
    path = backend.sre_path(a, b, spec.initial_value)
    _check_finite(path, spec.burn_in)
    series = TimeSeries(path[spec.burn_in:])
    if not return_noise:
        return series
    prev = float(path[spec.burn_in - 1]) if spec.burn_in > 0 else spec.initial_value
    return SreTrace(series, a[spec.burn_in:], b[spec.burn_in:], prev)


class SreTrace(NamedTuple):
    """SRE simulation output with both coefficient draws retained."""

    series: TimeSeries
    a: np.ndarray
    b: np.ndarray
    previous_value: float
