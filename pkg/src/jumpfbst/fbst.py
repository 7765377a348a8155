"""Evidence engine for the sharp no-jump hypothesis.

The test works on the unnormalized posterior over (lam, p, mu, sigma2[, k]).
A Monte Carlo cloud is drawn uniformly from a box containing the posterior
support; the supremum of the posterior over the null set {lam*p = 0} gives a
threshold, and the evidence against jumps is one minus the weighted fraction
of posterior mass strictly above that threshold.  Posterior mode and mean
estimates are read off the same cloud.

Sampling box: lam, p ~ U[0,1]; sigma2 ~ U(0, sigma0^2); mu ~ U(mu0 - c*sigma0,
mu0 + c*sigma0); k ~ U(0, k_max) when the jump size is random.  mu is drawn on
the sigma-independent box so the proposal is exactly uniform on a superset of
the support; points whose mu falls outside (mu0 - c*sigma, mu0 + c*sigma) get
log value -inf and zero weight, which keeps the self-normalized ratio
estimator valid.

Generation is chunked with per-chunk seeds derived from the master seed by
counter, so results are identical no matter how chunks are scheduled.
"""

from __future__ import annotations

import hashlib
import math
import struct
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DataError, DegenerateDataError, EstimationError
from .model import Hyperparams, Params, ReducedParams, Variant, reduce

__all__ = [
    "SampleCloud",
    "EvidenceReport",
    "data_digest",
    "sample_support",
    "sup_null",
    "evidence",
    "posterior_mode",
    "posterior_mean",
    "run_fbst",
    "save_cloud",
    "load_cloud",
]

_CHUNK = 1 << 16
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_SIGMA2_FLOOR = 1e-12
_CLOUD_MAGIC = b"FBSTCLD1"


def data_digest(data) -> int:
    """Order-sensitive 64-bit digest of a float64 series."""
    buf = np.ascontiguousarray(data, dtype="<f8").tobytes()
    return struct.unpack("<Q", hashlib.sha256(buf).digest()[:8])[0]


def _checked_data(data) -> np.ndarray:
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("data must be a nonempty one-dimensional sequence")
    if not np.all(np.isfinite(x)):
        raise ValueError("data must be finite")
    return x


def _eval_log_posterior(x, hyper, eta, mu, sigma2, k):
    return _kernels.batch_log_posterior(
        x, eta, mu, sigma2, k,
        hyper.beta, hyper.sigma0, hyper.mu0, hyper.c,
        hyper.k_upper, hyper.log_k_const,
    )


@dataclass
class SampleCloud:
    """Monte Carlo cloud of parameter points with their log posterior values.

    Points with ``-inf`` log value are retained; they carry zero weight in
    every estimator computed from the cloud.
    """

    lam: np.ndarray
    p: np.ndarray
    mu: np.ndarray
    sigma2: np.ndarray
    k: np.ndarray
    log_values: np.ndarray
    seed: int
    hyper: Hyperparams
    data_digest: int

    def __len__(self) -> int:
        return int(self.lam.size)

    @property
    def eta(self) -> np.ndarray:
        return self.lam * self.p

    def point(self, i: int) -> Params:
        return Params(float(self.lam[i]), float(self.p[i]), float(self.mu[i]),
                      float(self.sigma2[i]), float(self.k[i]))


@dataclass(frozen=True)
class EvidenceReport:
    """Evidence value with its ingredients and cloud diagnostics."""

    ev: float
    kappa0: float
    log_phi0: float
    n_support: int
    n_null: int
    seed: int
    mode: ReducedParams
    mean: ReducedParams
    ess: float

    def to_json_dict(self) -> dict:
        def _rp(r: ReducedParams) -> dict:
            return {"eta": float(r.eta), "mu": float(r.mu),
                    "sigma": float(r.sigma), "k": float(r.k)}

        return {
            "ev": float(self.ev),
            "kappa0": float(self.kappa0),
            "log_phi0": float(self.log_phi0),
            "n_support": int(self.n_support),
            "n_null": int(self.n_null),
            "seed": int(self.seed),
            "mode": _rp(self.mode),
            "mean": _rp(self.mean),
            "ess": float(self.ess),
        }


def _draw_chunk(hyper: Hyperparams, size: int, seed: int, stream: int, index: int,
                on_null: bool):
    """One deterministic chunk of box-uniform draws.

    Draw order (lam, p, sigma2, mu, k) is part of the reproducibility
    contract; chunk seeds derive from (seed, stream, index).
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), stream, index]))
    if on_null:
        lam = np.zeros(size)
        p = rng.random(size)
    else:
        lam = rng.random(size)
        p = rng.random(size)
    sigma2 = rng.random(size) * (hyper.sigma0 * hyper.sigma0)
    mu = hyper.mu0 + hyper.c * hyper.sigma0 * (2.0 * rng.random(size) - 1.0)
    if hyper.variant is Variant.RANDOM_JUMP_SIZE:
        k = rng.random(size) * hyper.k_max
    else:
        k = np.full(size, hyper.fixed_k)
    return lam, p, mu, sigma2, k


def sample_support(data, hyper: Hyperparams, n: int, seed: int) -> SampleCloud:
    """Draw n points uniformly from the sampling box and evaluate each one."""
    x = _checked_data(data)
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n}")
    if not (isinstance(seed, int) and seed >= 0):
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")

    parts = {name: [] for name in ("lam", "p", "mu", "sigma2", "k", "logv")}
    index = 0
    remaining = n
    while remaining > 0:
        size = min(_CHUNK, remaining)
        lam, p, mu, sigma2, k = _draw_chunk(hyper, size, seed, 0, index, on_null=False)
        logv = _eval_log_posterior(x, hyper, lam * p, mu, sigma2, k)
        parts["lam"].append(lam)
        parts["p"].append(p)
        parts["mu"].append(mu)
        parts["sigma2"].append(sigma2)
        parts["k"].append(k)
        parts["logv"].append(logv)
        remaining -= size
        index += 1

    return SampleCloud(
        lam=np.concatenate(parts["lam"]),
        p=np.concatenate(parts["p"]),
        mu=np.concatenate(parts["mu"]),
        sigma2=np.concatenate(parts["sigma2"]),
        k=np.concatenate(parts["k"]),
        log_values=np.concatenate(parts["logv"]),
        seed=seed,
        hyper=hyper,
        data_digest=data_digest(x),
    )


def _sup_null_mc(x: np.ndarray, hyper: Hyperparams, n: int, seed: int) -> float:
    """Sample maximum of the log posterior over the null set {lam = 0}."""
    best = -math.inf
    index = 0
    remaining = n
    while remaining > 0:
        size = min(_CHUNK, remaining)
        lam, p, mu, sigma2, k = _draw_chunk(hyper, size, seed, 1, index, on_null=True)
        logv = _eval_log_posterior(x, hyper, lam * p, mu, sigma2, k)
        top = float(np.max(logv))
        if top > best:
            best = top
        remaining -= size
        index += 1
    return best


def _sup_null_closed_form(x: np.ndarray, hyper: Hyperparams) -> float:
    """Exact maximizer of the pure-Gaussian posterior kernel on the null set.

    On {lam*p = 0} the (lam, p) prior factor is 1 for every beta, so the
    kernel is -(n/2) log(2 pi s2) - S_mu/(2 s2) - log(sigma) plus the constant
    jump-size prior term.  The optimum is mu* = clamp(mean, mu0 +/- c*sigma)
    and s2* = clamp(S_mu*/(n+1), floor, sigma0^2); the mu-clamp is iterated
    because its bounds move with sigma.
    """
    n = x.size
    xbar = float(np.mean(x))
    s2_hi = np.nextafter(hyper.sigma0 * hyper.sigma0, 0.0)
    mu_star = xbar
    s2_star = None
    for _ in range(3):
        s_mu = float(np.sum((x - mu_star) ** 2))
        s2_star = min(max(s_mu / (n + 1), _SIGMA2_FLOOR), s2_hi)
        sig = math.sqrt(s2_star)
        lo = hyper.mu0 - hyper.c * sig
        hi = hyper.mu0 + hyper.c * sig
        mu_star = min(max(xbar, np.nextafter(lo, hi)), np.nextafter(hi, lo))
    s_mu = float(np.sum((x - mu_star) ** 2))
    return (-0.5 * n * math.log(2.0 * math.pi * s2_star)
            - s_mu / (2.0 * s2_star)
            - 0.5 * math.log(s2_star)
            + hyper.log_k_const)


def sup_null(data, hyper: Hyperparams, n: int, seed: int) -> float:
    """Log supremum of the unnormalized posterior over the no-jump set.

    Returns the larger of a Monte Carlo sample maximum and the exact
    closed-form maximizer, which removes the downward bias of the sample
    maximum alone.
    """
    x = _checked_data(data)
    if float(np.max(x)) == float(np.min(x)):
        raise DegenerateDataError("all observations are equal; the null supremum diverges")
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n}")
    return max(_sup_null_mc(x, hyper, n, seed), _sup_null_closed_form(x, hyper))


def _finite_weights(log_values: np.ndarray) -> np.ndarray:
    """exp(logv - max finite logv), zero where logv is -inf."""
    finite = np.isfinite(log_values)
    if not finite.any():
        raise EstimationError("no point with positive posterior value; support missed")
    m = float(np.max(log_values[finite]))
    return np.exp(log_values - m)


def evidence(cloud: SampleCloud, log_phi0: float) -> tuple[float, float]:
    """Evidence against jumps and tangential-set credibility, as (ev, kappa0).

    kappa0 is the self-normalized weight of points whose log posterior value
    strictly exceeds log_phi0; ev = 1 - kappa0 exactly.
    """
    logv = cloud.log_values
    w = _finite_weights(logv)
    above = logv > log_phi0
    finite = np.isfinite(logv)
    # exact endpoints: summation round-off must not leak into the trivial cases
    if not above[finite].any():
        return 1.0, 0.0
    if above[finite].all():
        return 0.0, 1.0
    kappa0 = float(np.sum(w[above]) / np.sum(w))
    return 1.0 - kappa0, kappa0


def _golden_max(f, lo: float, hi: float, iters: int = 48) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _refine_mode(x: np.ndarray, hyper: Hyperparams, vec: np.ndarray,
                 logv: float, sweeps: int = 3) -> tuple[np.ndarray, float]:
    """Cyclic coordinate ascent (golden section per coordinate) from vec.

    Confined to the prior support; a sweep proposal is accepted only when it
    improves, so the refined value never drops below the input value.
    """
    best = np.array(vec, dtype=np.float64)
    best_val = logv
    s2_hi = np.nextafter(hyper.sigma0 * hyper.sigma0, 0.0)
    random_k = hyper.variant is Variant.RANDOM_JUMP_SIZE
    coords = [0, 1, 2, 3] + ([4] if random_k else [])

    def value_at(v):
        out = _eval_log_posterior(x, hyper, np.array([v[0] * v[1]]), np.array([v[2]]),
                                  np.array([v[3]]), np.array([v[4]]))
        return float(out[0])

    for _ in range(sweeps):
        for ci in coords:
            if ci in (0, 1):
                lo, hi = 0.0, 1.0
            elif ci == 2:
                sig = math.sqrt(best[3])
                lo = np.nextafter(hyper.mu0 - hyper.c * sig, hyper.mu0)
                hi = np.nextafter(hyper.mu0 + hyper.c * sig, hyper.mu0)
            elif ci == 3:
                lo, hi = _SIGMA2_FLOOR, s2_hi
            else:
                lo, hi = _SIGMA2_FLOOR, hyper.k_max

            def f(t, ci=ci):
                trial = best.copy()
                trial[ci] = t
                return value_at(trial)

            t_opt, f_opt = _golden_max(f, lo, hi)
            if f_opt > best_val:
                best[ci] = t_opt
                best_val = f_opt
    return best, best_val


def posterior_mode(cloud: SampleCloud, data=None, refine: bool = True) -> ReducedParams:
    """Reduced coordinates of the highest-valued cloud point.

    When the data are supplied (and refine is true) the raw argmax is polished
    by coordinate ascent; the polished point never has a smaller log posterior
    value than the raw cloud maximum.
    """
    logv = cloud.log_values
    finite = np.isfinite(logv)
    if not finite.any():
        raise EstimationError("no point with positive posterior value; support missed")
    i = int(np.argmax(np.where(finite, logv, -np.inf)))
    vec = np.array([cloud.lam[i], cloud.p[i], cloud.mu[i], cloud.sigma2[i], cloud.k[i]])
    if refine and data is not None:
        x = _checked_data(data)
        if data_digest(x) != cloud.data_digest:
            raise DataError("data does not match the series this cloud was built from")
        vec, _ = _refine_mode(x, cloud.hyper, vec, float(logv[i]))
    return reduce(Params(float(vec[0]), float(vec[1]), float(vec[2]),
                         float(vec[3]), float(vec[4])))


def posterior_mean(cloud: SampleCloud) -> tuple[ReducedParams, float]:
    """Self-normalized posterior mean of the reduced coordinates, plus ESS.

    The effective sample size (sum w)^2 / sum w^2 flags unreliable clouds;
    a warning is emitted below 100.
    """
    w = _finite_weights(cloud.log_values)
    total = float(np.sum(w))
    ess = total * total / float(np.sum(w * w))
    if ess < 100.0:
        warnings.warn(f"effective sample size {ess:.1f} < 100; "
                      "estimates may be unstable", RuntimeWarning, stacklevel=2)
    eta = float(np.sum(w * cloud.eta) / total)
    mu = float(np.sum(w * cloud.mu) / total)
    sigma = float(np.sum(w * np.sqrt(cloud.sigma2)) / total)
    k = float(np.sum(w * cloud.k) / total)
    return ReducedParams(eta, mu, sigma, k), ess


def run_fbst(data, hyper: Hyperparams, n_support: int = 400_000,
             n_null: int = 400_000, seed: int = 0, refine_mode: bool = True,
             return_cloud: bool = False):
    """Full pipeline: sample, find the null supremum, integrate, estimate.

    Deterministic given all arguments.  With ``return_cloud=True`` the
    support cloud comes back alongside the report so risk queries can reuse
    it without resampling.
    """
    x = _checked_data(data)
    cloud = sample_support(x, hyper, n_support, seed)
    log_phi0 = sup_null(x, hyper, n_null, seed)
    ev, kappa0 = evidence(cloud, log_phi0)
    mode = posterior_mode(cloud, x, refine=refine_mode)
    mean, ess = posterior_mean(cloud)
    report = EvidenceReport(ev=ev, kappa0=kappa0, log_phi0=float(log_phi0),
                            n_support=n_support, n_null=n_null, seed=seed,
                            mode=mode, mean=mean, ess=ess)
    if return_cloud:
        return report, cloud
    return report


_VARIANT_CODE = {Variant.FIXED_JUMP_SIZE: 0.0, Variant.RANDOM_JUMP_SIZE: 1.0}


def save_cloud(path, cloud: SampleCloud) -> None:
    """Write a cloud to the binary cloud format.

    Layout: 8 magic bytes, then little-endian 64-bit header fields (count,
    seed, beta, sigma0, mu0, c, k_max or NaN, fixed_k, variant code, data
    digest), then count records of 6 float64: lam, p, mu, sigma2, k, logv.
    """
    h = cloud.hyper
    n = len(cloud)
    header = struct.pack(
        "<QQ6ddQ",
        n, cloud.seed,
        h.beta, h.sigma0, h.mu0, h.c,
        math.nan if h.k_max is None else h.k_max,
        h.fixed_k,
        _VARIANT_CODE[h.variant],
        cloud.data_digest,
    )
    records = np.column_stack([cloud.lam, cloud.p, cloud.mu,
                               cloud.sigma2, cloud.k, cloud.log_values])
    with open(path, "wb") as fh:
        fh.write(_CLOUD_MAGIC)
        fh.write(header)
        fh.write(np.ascontiguousarray(records, dtype="<f8").tobytes())


def load_cloud(path) -> SampleCloud:
    """Read a cloud written by save_cloud."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:8] != _CLOUD_MAGIC:
        raise DataError(f"{path}: not a cloud file (bad magic)")
    header_fmt = "<QQ6ddQ"
    header_size = struct.calcsize(header_fmt)
    n, seed, beta, sigma0, mu0, c, k_max, fixed_k, variant_code, digest = struct.unpack(
        header_fmt, blob[8:8 + header_size])
    body = np.frombuffer(blob[8 + header_size:], dtype="<f8")
    if body.size != 6 * n:
        raise DataError(f"{path}: truncated cloud file")
    records = body.reshape(n, 6)
    variant = Variant.RANDOM_JUMP_SIZE if variant_code == 1.0 else Variant.FIXED_JUMP_SIZE
    hyper = Hyperparams(beta=beta, sigma0=sigma0, mu0=mu0, c=c,
                        k_max=None if math.isnan(k_max) else k_max,
                        variant=variant, fixed_k=fixed_k)
    return SampleCloud(
        lam=records[:, 0].copy(), p=records[:, 1].copy(), mu=records[:, 2].copy(),
        sigma2=records[:, 3].copy(), k=records[:, 4].copy(),
        log_values=records[:, 5].copy(),
        seed=int(seed), hyper=hyper, data_digest=int(digest),
    )
