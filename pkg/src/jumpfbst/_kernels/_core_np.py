"""Pure-numpy fallback for the posterior evaluation kernel.

Same contract as the compiled core: given a data vector and arrays of
reduced-parameter coordinates, return the log unnormalized posterior at each
point, with ``-inf`` for points off the prior support.  Points are processed
in fixed-size chunks to bound the (points x observations) temporaries.
"""

import numpy as np

_CHUNK = 1 << 15


def batch_log_posterior(data, eta, mu, sigma2, k,
                        beta, sigma0, mu0, c, k_hi, extra_log_const):
    """Log unnormalized posterior at each (eta, mu, sigma2, k) point.

    ``k_hi`` is the upper support bound for the jump size (``inf`` when the
    jump size is not a free coordinate); ``extra_log_const`` is any constant
    log-prior term (e.g. of a uniform jump-size prior).
    """
    x = np.ascontiguousarray(data, dtype=np.float64)
    eta = np.ascontiguousarray(eta, dtype=np.float64)
    mu = np.ascontiguousarray(mu, dtype=np.float64)
    sigma2 = np.ascontiguousarray(sigma2, dtype=np.float64)
    k = np.ascontiguousarray(k, dtype=np.float64)
    m = eta.shape[0]
    out = np.full(m, -np.inf, dtype=np.float64)
    for lo in range(0, m, _CHUNK):
        hi = min(lo + _CHUNK, m)
        _chunk(x, eta[lo:hi], mu[lo:hi], sigma2[lo:hi], k[lo:hi],
               beta, sigma0, mu0, c, k_hi, extra_log_const, out[lo:hi])
    return out


def _chunk(x, eta, mu, sigma2, k, beta, sigma0, mu0, c, k_hi, extra, out):
    n = x.size
    ok = (eta >= 0.0) & (eta <= 1.0)
    ok &= (sigma2 > 0.0) & (sigma2 < sigma0 * sigma0)
    ok &= (k >= 0.0) & (k <= k_hi)
    if beta != 1.0:
        ok &= eta < 1.0
    sig = np.sqrt(np.where(sigma2 > 0.0, sigma2, 1.0))
    ok &= np.abs(mu - mu0) < c * sig

    idx = np.nonzero(ok)[0]
    if idx.size == 0:
        return
    e = eta[idx]
    m_ = mu[idx]
    s2 = sigma2[idx]
    kk = k[idx]

    a = -0.5 * (x[None, :] - m_[:, None]) ** 2 / s2[:, None]
    b = -0.5 * (x[None, :] - (m_ + kk)[:, None]) ** 2 / s2[:, None]
    top = np.maximum(a, b)
    with np.errstate(divide="ignore", under="ignore"):
        t = top + np.log((1.0 - e)[:, None] * np.exp(a - top)
                         + e[:, None] * np.exp(b - top))
    # eta exactly 0 or 1 collapses to a single component; bypass the
    # combination so a vanished component cannot underflow the row.
    row0 = e == 0.0
    row1 = e == 1.0
    if row0.any():
        t[row0] = a[row0]
    if row1.any():
        t[row1] = b[row1]

    ll = t.sum(axis=1) - 0.5 * n * np.log(2.0 * np.pi * s2)
    pri = -0.5 * np.log(s2) + extra
    if beta != 1.0:
        pri = pri + (beta - 1.0) * np.log1p(-e)
    out[idx] = pri + ll
