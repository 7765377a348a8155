"""Posterior-predictive risk queries over a sampled parameter cloud.

Exceedance probabilities are per-parameter mixture tail masses; survival
curves and expected times average them over the cloud with the same
self-normalized weights the evidence computation uses.  Periods are treated
as independent given the parameter, so the per-parameter survival through
time t is (1 - P(S >= l | theta))^t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .errors import EstimationError
from .fbst import SampleCloud, _finite_weights
from .model import ReducedParams

__all__ = [
    "RiskQuery",
    "exceedance_prob",
    "marginal_exceedance",
    "survival_curve",
    "expected_time",
    "write_survival_csv",
    "write_times_csv",
]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _norm_upper_tail(x):
    """P(Z >= x) for standard normal Z, accurate deep into the tail."""
    return 0.5 * erfc(np.asarray(x) * _INV_SQRT2)


@dataclass(frozen=True)
class RiskQuery:
    """Threshold levels (standardized units) and a horizon in periods."""

    thresholds: tuple
    t_max: int

    def __post_init__(self):
        t = tuple(float(v) for v in self.thresholds)
        if len(t) == 0:
            raise ValueError("thresholds must be nonempty")
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError("thresholds must be strictly increasing")
        object.__setattr__(self, "thresholds", t)
        if not (isinstance(self.t_max, int) and self.t_max >= 1):
            raise ValueError(f"t_max must be a positive integer, got {self.t_max}")


def exceedance_prob(theta: ReducedParams, l: float) -> float:
    """P(S >= l) under the mixture at one parameter point."""
    z0 = (l - theta.mu) / theta.sigma
    z1 = (l - theta.mu - theta.k) / theta.sigma
    return float((1.0 - theta.eta) * _norm_upper_tail(z0)
                 + theta.eta * _norm_upper_tail(z1))


def _exceedance_vector(cloud: SampleCloud, l: float) -> np.ndarray:
    eta = cloud.eta
    sigma = np.sqrt(cloud.sigma2)
    z0 = (l - cloud.mu) / sigma
    z1 = (l - cloud.mu - cloud.k) / sigma
    return (1.0 - eta) * _norm_upper_tail(z0) + eta * _norm_upper_tail(z1)


def marginal_exceedance(cloud: SampleCloud, l: float) -> float:
    """Posterior-weighted mean of the per-parameter exceedance probability."""
    w = _finite_weights(cloud.log_values)
    return float(np.sum(w * _exceedance_vector(cloud, l)) / np.sum(w))


def survival_curve(cloud: SampleCloud, l: float, t_max: int) -> np.ndarray:
    """P(no value >= l through time t) for t = 0..t_max; entry 0 is 1."""
    if not (isinstance(t_max, int) and t_max >= 1):
        raise ValueError(f"t_max must be a positive integer, got {t_max}")
    w = _finite_weights(cloud.log_values)
    total = float(np.sum(w))
    keep = 1.0 - _exceedance_vector(cloud, l)
    out = np.empty(t_max + 1, dtype=np.float64)
    running = w.copy()
    out[0] = 1.0
    for t in range(1, t_max + 1):
        running *= keep
        out[t] = float(np.sum(running) / total)
    return out


def expected_time(cloud: SampleCloud, l: float, per_point: bool = False) -> float:
    """Expected periods until a value >= l, as the reciprocal marginal
    exceedance.

    ``per_point=True`` instead averages the per-parameter waiting times
    1/P(S >= l | theta); the two differ whenever the exceedance varies across
    the cloud (the reciprocal of an average is not the average of
    reciprocals).
    """
    if per_point:
        w = _finite_weights(cloud.log_values)
        pvec = _exceedance_vector(cloud, l)
        live = w > 0.0
        if np.any(pvec[live] <= 0.0):
            raise EstimationError(f"zero exceedance probability at threshold {l}")
        return float(np.sum(w[live] / pvec[live]) / np.sum(w))
    p = marginal_exceedance(cloud, l)
    if p <= 0.0:
        raise EstimationError(f"zero exceedance probability at threshold {l}")
    return 1.0 / p


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_survival_csv(path, thresholds_label, curves, comment: str | None = None) -> None:
    """Survival curves as CSV: column t, one column per threshold label."""
    curves = np.asarray(curves)
    with open(path, "w", newline="\n") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write("t," + ",".join(_fmt(l) for l in thresholds_label) + "\n")
        for t in range(curves.shape[0]):
            fh.write(str(t) + "," + ",".join(_fmt(v) for v in curves[t]) + "\n")


def write_times_csv(path, thresholds_label, times, comment: str | None = None) -> None:
    """Expected times as a two-column CSV (threshold, expected_time)."""
    with open(path, "w", newline="\n") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write("threshold,expected_time\n")
        for l, t in zip(thresholds_label, times):
            fh.write(f"{_fmt(l)},{_fmt(t)}\n")
