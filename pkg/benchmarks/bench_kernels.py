#!/usr/bin/env python3
"""Benchmark the compiled posterior kernel against the numpy fallback.

The kernel evaluates the log unnormalized posterior over the Monte Carlo
cloud and dominates end-to-end runtime, so this is the number that decides
whether building the extension is worth it on a given machine.

Usage: python benchmarks/bench_kernels.py [--points N] [--obs N] [--repeat N]
"""

import argparse
import importlib.util
import time

import numpy as np

from jumpfbst._kernels import _core_np
from jumpfbst.model import Hyperparams, Variant


def load_backends():
    backends = {"numpy": _core_np}
    if importlib.util.find_spec("jumpfbst._kernels._core") is not None:
        from jumpfbst._kernels import _core

        backends["cython"] = _core
    return backends


def workload(n_points, n_obs, seed=0):
    rng = np.random.default_rng(seed)
    hyper = Hyperparams(sigma0=10.0, mu0=0.0, c=10.0, k_max=30.0,
                        variant=Variant.RANDOM_JUMP_SIZE)
    data = rng.normal(size=n_obs)
    eta = rng.random(n_points) * rng.random(n_points)
    mu = hyper.mu0 + hyper.c * hyper.sigma0 * (2 * rng.random(n_points) - 1)
    sigma2 = rng.random(n_points) * hyper.sigma0 ** 2
    k = rng.random(n_points) * hyper.k_max
    return hyper, data, eta, mu, sigma2, k


def bench(impl, hyper, data, eta, mu, sigma2, k, repeat):
    args = (data, eta, mu, sigma2, k, hyper.beta, hyper.sigma0, hyper.mu0,
            hyper.c, hyper.k_upper, hyper.log_k_const)
    impl.batch_log_posterior(*args)  # warm up
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = impl.batch_log_posterior(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=800_000,
                        help="cloud size (default: one full test run, 400k+400k)")
    parser.add_argument("--obs", type=int, default=40)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    hyper, data, eta, mu, sigma2, k = workload(args.points, args.obs)
    backends = load_backends()
    results = {}
    reference = None
    for name, impl in backends.items():
        elapsed, out = bench(impl, hyper, data, eta, mu, sigma2, k, args.repeat)
        results[name] = elapsed
        if reference is None:
            reference = out
        else:
            finite = np.isfinite(reference)
            assert np.array_equal(finite, np.isfinite(out))
            assert np.allclose(reference[finite], out[finite], rtol=1e-12, atol=1e-9)

    rate_fmt = "{name:>7s}: {sec:8.3f} s  ({rate:6.1f} M point-obs/s)"
    print(f"{args.points:,} points x {args.obs} observations, "
          f"best of {args.repeat}:")
    for name, sec in results.items():
        print(rate_fmt.format(name=name, sec=sec,
                              rate=args.points * args.obs / sec / 1e6))
    if "cython" in results and "numpy" in results:
        print(f"speedup: {results['numpy'] / results['cython']:.2f}x "
              "(backends agree to 1e-12)")
    else:
        print("compiled backend not built; numpy fallback only")


if __name__ == "__main__":
    main()
