"""Pure NumPy/SciPy fallback for the compiled kernels in ``_kernels.pyx``.

Same signatures and semantics; used automatically when the extension is
not built (see ``tailtest.backend``).  Prefix sums are accumulated in
extended precision instead of Neumaier compensation, which gives the same
O(eps * prefix) error bound on platforms where ``np.longdouble`` is wider
than float64.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter


def prefix_tables(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cumulative sums of x, x**2 and |x|, each length n+1 with leading 0."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    cum = np.zeros(n + 1)
    cum_sq = np.zeros(n + 1)
    cum_abs = np.zeros(n + 1)
    wide = x.astype(np.longdouble)
    cum[1:] = np.cumsum(wide).astype(np.float64)
    cum_sq[1:] = np.cumsum(wide * wide).astype(np.float64)
    cum_abs[1:] = np.cumsum(np.abs(wide)).astype(np.float64)
    return cum, cum_sq, cum_abs


def ar1_path(z: np.ndarray, delta: float, phi: float, x0: float) -> np.ndarray:
    """x[t] = delta + phi * x[t-1] + z[t], a constant-coefficient IIR filter."""
    z = np.asarray(z, dtype=np.float64)
    out, _ = lfilter([1.0], [1.0, -phi], z + delta, zi=[phi * x0])
    return out


def sre_path(a: np.ndarray, b: np.ndarray, x0: float) -> np.ndarray:
    """x[t] = a[t] * x[t-1] + b[t]; time-varying coefficient, plain loop."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = np.empty(a.size)
    x = x0
    for t in range(a.size):
        x = a[t] * x + b[t]
        out[t] = x
    return out


def garch_sigma2(eps2: np.ndarray, omega: float, alpha: float, beta: float,
                 s2_init: float) -> np.ndarray:
    """GARCH(1,1) variance filter, vectorized as an IIR filter in sigma^2."""
    eps2 = np.asarray(eps2, dtype=np.float64)
    out = np.empty(eps2.size)
    out[0] = s2_init
    if eps2.size > 1:
        drive = omega + alpha * eps2[:-1]
        out[1:], _ = lfilter([1.0], [1.0, -beta], drive, zi=[beta * s2_init])
    return out
