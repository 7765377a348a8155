"""Tests for the synthetic data generators."""

import math

import numpy as np
import pytest
from scipy.stats import kstest

from jumpfbst.errors import DataError
from jumpfbst.simulate import (SimConfig, _returns_and_indicators,
                               returns_from_prices, simulate_price_path,
                               simulate_returns)


def test_degenerate_normal_returns_collapse_to_mu():
    cfg = SimConfig(n=200, mu=2.5, sigma=1e-12, eta=0.0, seed=1)
    x = simulate_returns(cfg)
    assert np.all(np.abs(x - 2.5) < 1e-9)


def test_identical_config_reproduces_identical_sequence():
    cfg = SimConfig(n=500, mu=0.1, sigma=0.4, eta=0.2, k=1.3, seed=99)
    a = simulate_returns(cfg)
    b = simulate_returns(cfg)
    assert np.array_equal(a, b)


def test_jump_cluster_sits_one_jump_above_the_body():
    # main mass near mu, jumped observations near mu + k
    cfg = SimConfig(n=40, mu=5.0, sigma=0.2, eta=0.05, k=1.0, seed=12)
    x, jumps = _returns_and_indicators(cfg)
    assert abs(np.mean(x[~jumps]) - 5.0) < 0.2
    if jumps.any():
        assert np.all(np.abs(x[jumps] - 6.0) < 1.0)


def test_empirical_jump_fraction_matches_eta():
    n, eta = 100_000, 0.3
    cfg = SimConfig(n=n, mu=0.0, sigma=1.0, eta=eta, seed=7)
    _, jumps = _returns_and_indicators(cfg)
    tol = 3.0 * math.sqrt(eta * (1 - eta) / n)
    assert abs(jumps.mean() - eta) < tol


def test_no_jump_returns_pass_ks_against_normal():
    # distributional check at desk scale, fixed seeds
    for seed in range(10):
        cfg = SimConfig(n=10_000, mu=0.3, sigma=0.7, eta=0.0, seed=seed)
        x = simulate_returns(cfg)
        result = kstest(x, "norm", args=(0.3, 0.7))
        assert result.pvalue > 0.01, f"seed {seed}: p={result.pvalue}"


def test_price_path_constant_without_drift_noise_or_jumps():
    cfg = SimConfig(n=50, mu=0.0, sigma=1e-12, eta=0.0, seed=3, s0=42.0)
    path = simulate_price_path(cfg)
    assert path.size == 51
    assert np.all(np.abs(path / 42.0 - 1.0) < 1e-6)


def test_price_path_log_increment_moments():
    mu, sigma, n = 0.05, 0.3, 100_000
    cfg = SimConfig(n=n, mu=mu, sigma=sigma, eta=0.0, seed=21, s0=1.0)
    incr = np.diff(np.log(simulate_price_path(cfg)))
    target_mean = mu - 0.5 * sigma ** 2
    assert abs(incr.mean() - target_mean) < 3.0 * sigma / math.sqrt(n)
    var_se = sigma ** 2 * math.sqrt(2.0 / (n - 1))
    assert abs(incr.var(ddof=1) - sigma ** 2) < 3.0 * var_se


def test_price_path_seed_determinism():
    cfg = SimConfig(n=100, mu=0.1, sigma=0.5, eta=0.3, k=0.8, seed=5, s0=10.0)
    assert np.array_equal(simulate_price_path(cfg), simulate_price_path(cfg))


def test_price_path_jumps_multiply_by_exp_k():
    cfg = SimConfig(n=60, mu=0.0, sigma=1e-12, eta=0.5, k=0.5, seed=8, s0=1.0)
    path = simulate_price_path(cfg)
    ratios = path[1:] / path[:-1]
    # with sigma ~ 0 each period either holds or multiplies by e^k
    assert np.all((np.abs(ratios - 1.0) < 1e-6) | (np.abs(ratios - math.exp(0.5)) < 1e-4))
    assert np.any(np.abs(ratios - math.exp(0.5)) < 1e-4)


def test_returns_from_prices_basics():
    assert np.allclose(returns_from_prices([5.0, 5.0, 5.0]), [0.0, 0.0])
    out = returns_from_prices([100.0, 110.0])
    assert out == pytest.approx([0.10])


def test_returns_from_prices_round_trip_length():
    cfg = SimConfig(n=64, mu=0.01, sigma=0.1, eta=0.1, k=0.5, seed=2, s0=100.0)
    path = simulate_price_path(cfg)
    assert returns_from_prices(path).size == path.size - 1


def test_returns_from_prices_errors():
    with pytest.raises(ValueError):
        returns_from_prices([1.0])
    with pytest.raises(DataError):
        returns_from_prices([1.0, -2.0, 3.0])
    with pytest.raises(DataError):
        returns_from_prices([1.0, 0.0])


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(n=0)
    with pytest.raises(ValueError):
        SimConfig(n=10, sigma=0.0)
    with pytest.raises(ValueError):
        SimConfig(n=10, eta=1.5)
    with pytest.raises(ValueError):
        SimConfig(n=10, k=0.0)
    with pytest.raises(ValueError):
        SimConfig(n=10, seed=-1)
    with pytest.raises(ValueError):
        SimConfig(n=10, s0=0.0)
