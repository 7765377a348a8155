# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled posterior-evaluation kernel.

Math is kept in lockstep with the numpy fallback in ``_core_np.py``; the
backend-equivalence tests hold the two to ~1e-12.
"""

from libc.math cimport INFINITY, M_PI, exp, fabs, log, log1p, sqrt

import numpy as np


cdef double _one_point(const double* x, Py_ssize_t n, double e, double m,
                       double s2, double kk, double beta, double s0sq,
                       double mu0, double c, double k_hi, double extra) noexcept nogil:
    cdef double sig, pri, inv2, acc, a, b, t, d0, d1
    cdef Py_ssize_t j

    if not (e >= 0.0 and e <= 1.0):
        return -INFINITY
    if s2 <= 0.0 or s2 >= s0sq:
        return -INFINITY
    if kk < 0.0 or kk > k_hi:
        return -INFINITY
    sig = sqrt(s2)
    if fabs(m - mu0) >= c * sig:
        return -INFINITY
    if beta != 1.0 and e >= 1.0:
        return -INFINITY

    pri = -0.5 * log(s2) + extra
    if beta != 1.0:
        pri += (beta - 1.0) * log1p(-e)

    inv2 = 0.5 / s2
    acc = 0.0
    for j in range(n):
        d0 = x[j] - m
        a = -d0 * d0 * inv2
        if e == 0.0:
            t = a
        else:
            d1 = d0 - kk
            b = -d1 * d1 * inv2
            if e == 1.0:
                t = b
            elif a >= b:
                t = a + log((1.0 - e) + e * exp(b - a))
            else:
                t = b + log((1.0 - e) * exp(a - b) + e)
        acc += t
    return pri + acc - 0.5 * n * log(2.0 * M_PI * s2)


def batch_log_posterior(data, eta, mu, sigma2, k,
                        double beta, double sigma0, double mu0, double c,
                        double k_hi, double extra_log_const):
    """Log unnormalized posterior at each (eta, mu, sigma2, k) point."""
    cdef double[::1] x = np.ascontiguousarray(data, dtype=np.float64)
    cdef double[::1] e = np.ascontiguousarray(eta, dtype=np.float64)
    cdef double[::1] m = np.ascontiguousarray(mu, dtype=np.float64)
    cdef double[::1] s2 = np.ascontiguousarray(sigma2, dtype=np.float64)
    cdef double[::1] kk = np.ascontiguousarray(k, dtype=np.float64)
    cdef Py_ssize_t npts = e.shape[0]
    cdef Py_ssize_t n = x.shape[0]
    out = np.empty(npts, dtype=np.float64)
    cdef double[::1] o = out
    cdef double s0sq = sigma0 * sigma0
    cdef Py_ssize_t i
    with nogil:
        for i in range(npts):
            o[i] = _one_point(&x[0], n, e[i], m[i], s2[i], kk[i],
                              beta, s0sq, mu0, c, k_hi, extra_log_const)
    return out
