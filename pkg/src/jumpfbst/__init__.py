"""Bayesian significance testing for Bernoulli jumps in diffusion returns.

The package simulates jump-diffusion return series, computes Monte Carlo
evidence for the sharp no-jump hypothesis, produces posterior mode/mean
estimates, and answers threshold-exceedance risk queries.  See the ``cli``
module (installed as the ``jumpfbst`` command) for the batch front-end.
"""

from ._kernels import BACKEND as kernel_backend
from .dataset import Dataset, Kind, read_series, standardize
from .errors import DataError, DegenerateDataError, EstimationError, JumpFbstError
from .fbst import (EvidenceReport, SampleCloud, data_digest, evidence,
                   load_cloud, posterior_mean, posterior_mode, run_fbst,
                   sample_support, save_cloud, sup_null)
from .model import (Hyperparams, Params, ReducedParams, Variant,
                    log_likelihood, log_posterior_unnorm, log_prior,
                    mixture_pdf, reduce)
from .risk import (RiskQuery, exceedance_prob, expected_time,
                   marginal_exceedance, survival_curve)
from .simulate import (SimConfig, returns_from_prices, simulate_price_path,
                       simulate_returns)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "Dataset", "Kind", "read_series", "standardize",
    "DataError", "DegenerateDataError", "EstimationError", "JumpFbstError",
    "EvidenceReport", "SampleCloud", "data_digest", "evidence", "load_cloud",
    "posterior_mean", "posterior_mode", "run_fbst", "sample_support",
    "save_cloud", "sup_null",
    "Hyperparams", "Params", "ReducedParams", "Variant", "log_likelihood",
    "log_posterior_unnorm", "log_prior", "mixture_pdf", "reduce",
    "RiskQuery", "exceedance_prob", "expected_time", "marginal_exceedance",
    "survival_curve",
    "SimConfig", "returns_from_prices", "simulate_price_path", "simulate_returns",
]
