"""Synthetic jump-diffusion data: discretized returns and exact price paths.

Returns follow ``mu + sigma*Z + B*k`` with Z standard normal and B
Bernoulli(eta); at most one jump per unit period.  Price paths follow the
exponential solution ``S_t = s0 * exp((mu - sigma^2/2) t + sigma W_t) * prod V_i``
with ``log V_i = k`` at each jump epoch.  Everything is a pure function of
(config, seed): identical configs reproduce identical output bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError

__all__ = ["SimConfig", "simulate_returns", "simulate_price_path", "returns_from_prices"]


@dataclass(frozen=True)
class SimConfig:
    n: int
    mu: float = 0.0
    sigma: float = 1.0
    eta: float = 0.0
    k: float = 1.0
    seed: int = 0
    s0: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not (0.0 <= self.eta <= 1.0):
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if not (self.k > 0.0 and math.isfinite(self.k)):
            raise ValueError(f"k must be positive, got {self.k}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed}")
        if not (self.s0 > 0.0 and math.isfinite(self.s0)):
            raise ValueError(f"s0 must be positive, got {self.s0}")


def _rng(cfg: SimConfig) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(cfg.seed))


def _returns_and_indicators(cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Returns plus the jump indicators that produced them (used by tests)."""
    rng = _rng(cfg)
    z = rng.standard_normal(cfg.n)
    jumps = rng.random(cfg.n) < cfg.eta
    return cfg.mu + cfg.sigma * z + np.where(jumps, cfg.k, 0.0), jumps


def simulate_returns(cfg: SimConfig) -> np.ndarray:
    """n periodic returns ``mu + sigma*Z_i + B_i*k``."""
    return _returns_and_indicators(cfg)[0]


def simulate_price_path(cfg: SimConfig) -> np.ndarray:
    """n+1 prices of the exact jump-diffusion solution on unit time steps."""
    rng = _rng(cfg)
    z = rng.standard_normal(cfg.n)
    jumps = rng.random(cfg.n) < cfg.eta
    log_incr = (cfg.mu - 0.5 * cfg.sigma ** 2) + cfg.sigma * z + np.where(jumps, cfg.k, 0.0)
    path = np.empty(cfg.n + 1, dtype=np.float64)
    path[0] = cfg.s0
    path[1:] = cfg.s0 * np.exp(np.cumsum(log_incr))
    return path


def returns_from_prices(prices) -> np.ndarray:
    """Periodic simple returns (S_{t+1} - S_t) / S_t."""
    p = np.asarray(prices, dtype=np.float64)
    if p.ndim != 1 or p.size < 2:
        raise ValueError("need at least two prices")
    if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
        raise DataError("prices must be positive and finite")
    return np.diff(p) / p[:-1]
