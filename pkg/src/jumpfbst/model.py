"""Parameter space, priors, likelihood and unnormalized posterior.

The observation model for one period's return is a two-component Gaussian
location mixture: with probability ``1 - eta`` the return is N(mu, sigma^2),
with probability ``eta`` the same normal shifted up by the jump size ``k``,
where ``eta = lam * p`` is the effective per-period jump probability.

``(lam, p)`` pairs with the same product are observationally equivalent, so
every density here depends on them only through ``eta``.  The prior is
``(1 - lam*p)^(beta-1)`` on the unit square, sigma^2 uniform on
``(0, sigma0^2)``, mu uniform on ``(mu0 - c*sigma, mu0 + c*sigma)`` given
sigma, and (in the random-jump-size variant) k uniform on ``[0, k_max]``.

All functions are pure; densities are evaluated in the log domain with a
shift-by-max combination of the two mixture components so that far-tail
observations do not underflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Variant",
    "Params",
    "ReducedParams",
    "Hyperparams",
    "reduce",
    "mixture_pdf",
    "log_likelihood",
    "log_prior",
    "log_posterior_unnorm",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class Variant(enum.Enum):
    """Jump-size handling: pinned to a known constant, or a free coordinate."""

    FIXED_JUMP_SIZE = "fixed"
    RANDOM_JUMP_SIZE = "random"


@dataclass(frozen=True)
class Params:
    """Full parameter point (lam, p, mu, sigma2, k).

    ``lam`` is the per-period jump intensity, ``p`` the jump-mark success
    probability; only the product ``lam * p`` is identified by data.
    """

    lam: float
    p: float
    mu: float
    sigma2: float
    k: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.lam <= 1.0 and 0.0 <= self.p <= 1.0):
            raise ValueError(f"lam and p must lie in [0, 1], got ({self.lam}, {self.p})")
        if not (math.isfinite(self.mu)):
            raise ValueError(f"mu must be finite, got {self.mu}")
        if not (self.sigma2 > 0.0 and math.isfinite(self.sigma2)):
            raise ValueError(f"sigma2 must be positive and finite, got {self.sigma2}")
        if not (self.k > 0.0 and math.isfinite(self.k)):
            raise ValueError(f"k must be positive and finite, got {self.k}")


@dataclass(frozen=True)
class ReducedParams:
    """Identified parameter (eta = lam*p, mu, sigma, k)."""

    eta: float
    mu: float
    sigma: float
    k: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.eta <= 1.0):
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if not (self.k > 0.0 and math.isfinite(self.k)):
            raise ValueError(f"k must be positive and finite, got {self.k}")


@dataclass(frozen=True)
class Hyperparams:
    """Prior hyperparameters plus the model-variant flag.

    ``fixed_k`` is the jump size used when ``variant`` is FIXED_JUMP_SIZE;
    it defaults to 1 and is expressed in the units of the data handed to the
    likelihood.  ``k_max`` is required exactly when the jump size is random.
    """

    beta: float = 1.0
    sigma0: float = 10.0
    mu0: float = 0.0
    c: float = 10.0
    k_max: float | None = None
    variant: Variant = Variant.FIXED_JUMP_SIZE
    fixed_k: float = 1.0

    def __post_init__(self):
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not (self.sigma0 > 0.0 and math.isfinite(self.sigma0)):
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")
        if not math.isfinite(self.mu0):
            raise ValueError(f"mu0 must be finite, got {self.mu0}")
        if not (self.c > 0.0 and math.isfinite(self.c)):
            raise ValueError(f"c must be positive, got {self.c}")
        if self.variant is Variant.RANDOM_JUMP_SIZE:
            if self.k_max is None or not (self.k_max > 0.0 and math.isfinite(self.k_max)):
                raise ValueError("k_max must be a positive real under the random-jump-size variant")
        elif self.k_max is not None:
            raise ValueError("k_max is only meaningful under the random-jump-size variant")
        if not (self.fixed_k > 0.0 and math.isfinite(self.fixed_k)):
            raise ValueError(f"fixed_k must be positive, got {self.fixed_k}")

    @property
    def log_k_const(self) -> float:
        """Log-density constant of the uniform jump-size prior (0 when fixed)."""
        if self.variant is Variant.RANDOM_JUMP_SIZE:
            return -math.log(self.k_max)
        return 0.0

    @property
    def k_upper(self) -> float:
        """Upper support bound for k (infinite under the fixed variant)."""
        if self.variant is Variant.RANDOM_JUMP_SIZE:
            return self.k_max
        return math.inf


def reduce(theta: Params) -> ReducedParams:
    """Collapse a full parameter point onto its identified image."""
    return ReducedParams(theta.lam * theta.p, theta.mu, math.sqrt(theta.sigma2), theta.k)


def mixture_pdf(y: float, theta: ReducedParams) -> float:
    """Density of one return under the Gaussian-Bernoulli mixture.

    (1/(sqrt(2*pi)*sigma)) * [(1-eta)*exp(-(y-mu)^2/(2 sigma^2))
                              + eta*exp(-(y-mu-k)^2/(2 sigma^2))]
    """
    if not math.isfinite(y):
        raise ValueError(f"y must be finite, got {y}")
    z0 = (y - theta.mu) / theta.sigma
    z1 = (y - theta.mu - theta.k) / theta.sigma
    return ((1.0 - theta.eta) * math.exp(-0.5 * z0 * z0)
            + theta.eta * math.exp(-0.5 * z1 * z1)) / (_SQRT_2PI * theta.sigma)


def _checked_data(data) -> np.ndarray:
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("data must be a nonempty one-dimensional sequence")
    if not np.all(np.isfinite(x)):
        raise ValueError("data must be finite")
    return x


def _log_likelihood_reduced(x: np.ndarray, eta: float, mu: float, sigma: float, k: float) -> float:
    a = -0.5 * ((x - mu) / sigma) ** 2
    if eta == 0.0:
        t = a
    elif eta == 1.0:
        t = -0.5 * ((x - mu - k) / sigma) ** 2
    else:
        b = -0.5 * ((x - mu - k) / sigma) ** 2
        hi = np.maximum(a, b)
        t = hi + np.log((1.0 - eta) * np.exp(a - hi) + eta * np.exp(b - hi))
    return float(np.sum(t)) - x.size * math.log(_SQRT_2PI * sigma)


def log_likelihood(theta: Params, data) -> float:
    """Log of the product of per-observation mixture densities.

    Depends on ``(lam, p)`` only through ``lam * p``: observationally
    equivalent points give bit-identical values.
    """
    x = _checked_data(data)
    r = reduce(theta)
    return _log_likelihood_reduced(x, r.eta, r.mu, r.sigma, r.k)


def log_prior(theta: Params, hyper: Hyperparams) -> float:
    """Log prior density up to a normalizing constant; ``-inf`` off-support.

    The (lam, p) factor diverges at lam*p = 1 when beta < 1; that boundary is
    clamped to ``-inf`` so no infinity can propagate into Monte Carlo sums.
    """
    eta = theta.lam * theta.p
    if theta.sigma2 >= hyper.sigma0 * hyper.sigma0:
        return -math.inf
    sigma = math.sqrt(theta.sigma2)
    if abs(theta.mu - hyper.mu0) >= hyper.c * sigma:
        return -math.inf
    if hyper.variant is Variant.RANDOM_JUMP_SIZE and theta.k > hyper.k_max:
        return -math.inf
    out = -math.log(sigma) + hyper.log_k_const
    if hyper.beta != 1.0:
        if eta == 1.0:
            return -math.inf
        out += (hyper.beta - 1.0) * math.log1p(-eta)
    return out


def log_posterior_unnorm(theta: Params, data, hyper: Hyperparams) -> float:
    """log_prior + log_likelihood; ``-inf`` propagates from the prior."""
    lp = log_prior(theta, hyper)
    if lp == -math.inf:
        return -math.inf
    return lp + log_likelihood(theta, data)
