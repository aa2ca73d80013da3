# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: compensated prefix sums and sequential recursions.

These are the inner loops that dominate the Monte Carlo harness.  A pure
NumPy/SciPy fallback with the same signatures lives in ``_kernels_py``;
``tailtest.backend`` picks one at import time.
"""

from libc.math cimport fabs

import numpy as np


def prefix_tables(const double[::1] x):
    """Cumulative sums of x, x**2 and |x| with Neumaier compensation.

    Returns three float64 arrays of length n+1 with index 0 equal to 0.
    Compensation keeps each prefix accurate to O(eps * prefix) even when
    individual observations span many orders of magnitude.
    """
    cdef Py_ssize_t n = x.shape[0]
    cum = np.empty(n + 1, dtype=np.float64)
    cum_sq = np.empty(n + 1, dtype=np.float64)
    cum_abs = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] c1 = cum
    cdef double[::1] c2 = cum_sq
    cdef double[::1] c3 = cum_abs
    cdef double s1 = 0.0, e1 = 0.0
    cdef double s2 = 0.0, e2 = 0.0
    cdef double s3 = 0.0, e3 = 0.0
    cdef double v, a, t
    cdef Py_ssize_t i
    c1[0] = 0.0
    c2[0] = 0.0
    c3[0] = 0.0
    for i in range(n):
        v = x[i]
        t = s1 + v
        if fabs(s1) >= fabs(v):
            e1 += (s1 - t) + v
        else:
            e1 += (v - t) + s1
        s1 = t
        c1[i + 1] = s1 + e1

        a = v * v
        t = s2 + a
        if s2 >= a:
            e2 += (s2 - t) + a
        else:
            e2 += (a - t) + s2
        s2 = t
        c2[i + 1] = s2 + e2

        a = fabs(v)
        t = s3 + a
        if s3 >= a:
            e3 += (s3 - t) + a
        else:
            e3 += (a - t) + s3
        s3 = t
        c3[i + 1] = s3 + e3
    return cum, cum_sq, cum_abs


def ar1_path(const double[::1] z, double delta, double phi, double x0):
    """Run x[t] = delta + phi * x[t-1] + z[t] from x0; returns the full path."""
    cdef Py_ssize_t m = z.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef double x = x0
    cdef Py_ssize_t t
    for t in range(m):
        x = delta + phi * x + z[t]
        o[t] = x
    return out


def sre_path(const double[::1] a, const double[::1] b, double x0):
    """Run x[t] = a[t] * x[t-1] + b[t] from x0; returns the full path."""
    cdef Py_ssize_t m = a.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef double x = x0
    cdef Py_ssize_t t
    for t in range(m):
        x = a[t] * x + b[t]
        o[t] = x
    return out


def garch_sigma2(const double[::1] eps2, double omega, double alpha, double beta,
                 double s2_init):
    """GARCH(1,1) variance filter: s2[0] = s2_init, then
    s2[t] = omega + alpha * eps2[t-1] + beta * s2[t-1]."""
    cdef Py_ssize_t n = eps2.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double s = s2_init
    cdef Py_ssize_t t
    o[0] = s
    for t in range(1, n):
        s = omega + alpha * eps2[t - 1] + beta * s
        o[t] = s
    return out
