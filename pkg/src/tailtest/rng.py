"""Deterministic, stream-splittable random variate generation.

Provides stable, Student-t and skewed Student-t draws plus the gamma
function used by the closed-form limit expressions.  Base generator is
NumPy's Philox, a counter-based 64-bit generator: two streams built from
the same ``(seed, stream_id)`` emit identical sequences on every platform
and under any degree of parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TWO63 = 1 << 63


def gamma_fn(x: float) -> float:
    """Gamma function, defined for all reals except the non-positive integers.

    Negative non-integer arguments are supported (the C library evaluates
    them through the reflection formula).  Raises ValueError at poles.
    """
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"gamma function pole at x={x}")
    return math.gamma(x)


@dataclass(frozen=True)
class RngStream:
    """Addressable random stream identified by (seed, stream_id).

    ``stream_id`` is typically a replication index; generators for
    different ids are statistically independent.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not (0 <= int(v) < _TWO63):
                raise ValueError(f"{name} must be a non-negative 63-bit integer")

    def generator(self, salt: int = 0) -> np.random.Generator:
        """Fresh generator for this stream.

        ``salt`` derives an auxiliary stream (e.g. for construction-time
        diagnostics) without consuming draws from the main one.
        """
        seq = np.random.SeedSequence([self.seed, self.stream_id, salt])
        return np.random.Generator(np.random.Philox(seq))


def _as_generator(stream) -> np.random.Generator:
    if isinstance(stream, np.random.Generator):
        return stream
    if isinstance(stream, RngStream):
        return stream.generator()
    raise TypeError(f"expected RngStream or Generator, got {type(stream).__name__}")


@dataclass(frozen=True)
class StableParams:
    """Stable law in the zero-type (S0) parameterization.

    ``kappa`` is the stability/tail index in (0, 2], ``beta_skew`` the
    skewness in [-1, 1].  For kappa < 2 the implied right tail-balance
    weight is p_+ = (1 + beta_skew) / 2.
    """

    kappa: float
    beta_skew: float = 0.0
    scale: float = 1.0
    location: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.kappa <= 2.0:
            raise ValueError(f"kappa must be in (0, 2], got {self.kappa}")
        if not -1.0 <= self.beta_skew <= 1.0:
            raise ValueError(f"beta_skew must be in [-1, 1], got {self.beta_skew}")
        if not self.scale > 0.0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @property
    def p_plus(self) -> float:
        """Right tail-balance weight implied by the skewness (kappa < 2)."""
        return (1.0 + self.beta_skew) / 2.0

    def mean(self) -> float:
        """Mean of the law; defined only for kappa > 1."""
        if self.kappa <= 1.0:
            raise ValueError("mean undefined for kappa <= 1")
        return self.location - self.beta_skew * self.scale * math.tan(
            math.pi * self.kappa / 2.0
        )


@dataclass(frozen=True)
class StudentParams:
    """Symmetric Student-t with ``kappa`` degrees of freedom."""

    kappa: float

    def __post_init__(self) -> None:
        if not self.kappa > 0.0:
            raise ValueError(f"degrees of freedom must be positive, got {self.kappa}")


@dataclass(frozen=True)
class SkewStudentParams:
    """Two-piece skewed Student-t, parameterized by tail balance.

    ``p_plus`` is the asymptotic share of the right tail in the total tail
    mass; the internal skew factor is gamma = (p_+/p_-)^(1/(2(1+kappa))).
    After standardization the law has mean 0 and variance kappa/(kappa-2)
    (requires kappa > 2), matching the variance of the symmetric t.
    """

    kappa: float
    p_plus: float = 0.5

    def __post_init__(self) -> None:
        if not self.kappa > 0.0:
            raise ValueError(f"degrees of freedom must be positive, got {self.kappa}")
        if not 0.0 < self.p_plus < 1.0:
            raise ValueError(f"p_plus must be in (0, 1), got {self.p_plus}")

    @property
    def skew_factor(self) -> float:
        ratio = self.p_plus / (1.0 - self.p_plus)
        return ratio ** (1.0 / (2.0 * (1.0 + self.kappa)))


def sample_stable(params: StableParams, stream, size: int | None = None):
    """Draw from the S0 stable law via the Chambers-Mallows-Stuck method.

    Returns a scalar when ``size`` is None, else a float64 array.
    """
    gen = _as_generator(stream)
    n = 1 if size is None else int(size)
    kappa, beta = params.kappa, params.beta_skew
    u = np.pi * (gen.random(n) - 0.5)
    w = gen.standard_exponential(n)
    if kappa == 1.0:
        half = np.pi / 2.0
        z = (
            (half + beta * u) * np.tan(u)
            - beta * np.log((half * w * np.cos(u)) / (half + beta * u))
        ) / half
        shift = (2.0 / np.pi) * beta * params.scale * math.log(params.scale)
        out = params.scale * z + shift + params.location
    else:
        bt = beta * math.tan(math.pi * kappa / 2.0)
        theta0 = math.atan(bt) / kappa
        prefac = (1.0 + bt * bt) ** (1.0 / (2.0 * kappa))
        z = (
            prefac
            * np.sin(kappa * (u + theta0))
            / np.cos(u) ** (1.0 / kappa)
            * (np.cos(u - kappa * (u + theta0)) / w) ** ((1.0 - kappa) / kappa)
        )
        out = params.scale * (z - bt) + params.location
    return float(out[0]) if size is None else out


def sample_student(kappa: float, stream, size: int | None = None):
    """Draw from the symmetric Student-t with ``kappa`` degrees of freedom."""
    if not kappa > 0.0:
        raise ValueError(f"degrees of freedom must be positive, got {kappa}")
    gen = _as_generator(stream)
    out = gen.standard_t(kappa, size=1 if size is None else int(size))
    return float(out[0]) if size is None else out


def _two_piece_moments(kappa: float, gam: float) -> tuple[float, float]:
    """Mean and variance of the unstandardized two-piece t draw."""
    # E|T| for t with kappa > 1 degrees of freedom
    m_abs = (
        2.0
        * math.sqrt(kappa)
        * gamma_fn((kappa + 1.0) / 2.0)
        / (math.sqrt(math.pi) * (kappa - 1.0) * gamma_fn(kappa / 2.0))
    )
    mean = m_abs * (gam - 1.0 / gam)
    second = (kappa / (kappa - 2.0)) * (gam**3 + gam**-3) / (gam + 1.0 / gam)
    return mean, second - mean * mean


def sample_skew_student(params: SkewStudentParams, stream, size: int | None = None):
    """Draw from the standardized two-piece skewed Student-t.

    A symmetric-t magnitude is assigned to the right branch (scaled by
    gamma) with probability gamma^2/(1+gamma^2), else to the left branch
    (scaled by 1/gamma); the result is centered and rescaled to variance
    kappa/(kappa-2).  Standardization requires kappa > 2.
    """
    if params.kappa <= 2.0:
        raise ValueError(
            f"variance standardization requires kappa > 2, got {params.kappa}"
        )
    gen = _as_generator(stream)
    n = 1 if size is None else int(size)
    gam = params.skew_factor
    t = np.abs(gen.standard_t(params.kappa, size=n))
    right = gen.random(n) < gam * gam / (1.0 + gam * gam)
    raw = np.where(right, gam * t, -t / gam)
    mean, var = _two_piece_moments(params.kappa, gam)
    target_var = params.kappa / (params.kappa - 2.0)
    out = (raw - mean) * math.sqrt(target_var / var)
    return float(out[0]) if size is None else out


@dataclass(frozen=True)
class NormalParams:
    """Gaussian noise (light-tailed reference case)."""

    mean: float = 0.0
    std: float = 1.0

    def __post_init__(self) -> None:
        if not self.std > 0.0:
            raise ValueError(f"std must be positive, got {self.std}")


@dataclass(frozen=True)
class ConstantParams:
    """Degenerate noise, every draw equals ``value``."""

    value: float


def sample_noise(spec, stream, size: int | None = None):
    """Dispatch on a noise specification (used by the DGP simulators)."""
    if isinstance(spec, StableParams):
        return sample_stable(spec, stream, size)
    if isinstance(spec, SkewStudentParams):
        return sample_skew_student(spec, stream, size)
    if isinstance(spec, StudentParams):
        return sample_student(spec.kappa, stream, size)
    if isinstance(spec, NormalParams):
        gen = _as_generator(stream)
        out = spec.mean + spec.std * gen.standard_normal(1 if size is None else int(size))
        return float(out[0]) if size is None else out
    if isinstance(spec, ConstantParams):
        if size is None:
            return spec.value
        return np.full(int(size), spec.value, dtype=np.float64)
    raise TypeError(f"unknown noise specification: {type(spec).__name__}")
