"""Command-line front-end: simulate, test, risk, density.

Exit codes: 0 success, 1 usage, 2 data problems, 3 estimation/degenerate
problems.  Every output file is a pure function of (input file, flags, seed),
so repeated invocations are byte-identical.

The ``test`` command standardizes the series first and, under the fixed
jump-size model, pins the jump at one *original* data unit, i.e. ``1/sd`` in
standardized units.  Hyperparameter and sampling flags may also come from an
optional flat key=value config file; explicit flags win over the config file,
which wins over the built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .dataset import Dataset, Kind, read_series
from .errors import DataError, EstimationError
from .fbst import (EvidenceReport, SampleCloud, data_digest, load_cloud,
                   posterior_mode, run_fbst, save_cloud)
from .model import Hyperparams, Variant, mixture_pdf
from .risk import (RiskQuery, expected_time, survival_curve,
                   write_survival_csv, write_times_csv)
from .simulate import SimConfig, simulate_price_path, simulate_returns

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ESTIMATION = 3

_TEST_DEFAULTS = {
    "beta": 1.0,
    "sigma0": 10.0,
    "mu0": 0.0,
    "c": 10.0,
    "k_max": 30.0,
    "samples": 400_000,
    "null_samples": 400_000,
    "seed": 0,
}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _write_column(path, values) -> None:
    with open(path, "w", newline="\n") as fh:
        for v in values:
            fh.write(_fmt(v) + "\n")


def _read_config(path) -> dict:
    """Flat key = value lines; blank lines and #-comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise DataError(f"{path}:{lineno}: expected key = value, got {text!r}")
            key, _, value = text.partition("=")
            out[key.strip()] = value.strip()
    return out


def _resolve(args, config: dict, key: str, cast):
    flag = getattr(args, key)
    if flag is not None:
        return flag
    if key in config:
        try:
            return cast(config[key])
        except ValueError:
            raise DataError(f"config value for {key!r} is not a {cast.__name__}") from None
    return _TEST_DEFAULTS[key]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jumpfbst",
                     description="Bayesian significance test for Bernoulli jumps "
                                 "in discretized diffusion returns")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate synthetic returns or a price path")
    p_sim.add_argument("--n", type=int, required=True, help="number of return periods")
    p_sim.add_argument("--mu", type=float, default=0.0)
    p_sim.add_argument("--sigma", type=float, default=1.0)
    p_sim.add_argument("--eta", type=float, default=0.0, help="per-period jump probability")
    p_sim.add_argument("--k", type=float, default=1.0, help="jump size")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", required=True, help="output CSV path")
    p_sim.add_argument("--path", action="store_true", help="emit a price path instead of returns")
    p_sim.add_argument("--s0", type=float, default=1.0, help="initial price (path mode)")
    p_sim.set_defaults(func=cmd_simulate)

    p_test = sub.add_parser("test", help="run the no-jump significance test")
    p_test.add_argument("--data", required=True)
    p_test.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    p_test.add_argument("--beta", type=float, default=None)
    p_test.add_argument("--sigma0", type=float, default=None)
    p_test.add_argument("--mu0", type=float, default=None)
    p_test.add_argument("--c", type=float, default=None)
    p_test.add_argument("--random-jump-size", action="store_true",
                        help="treat the jump size as a free parameter")
    p_test.add_argument("--k-max", dest="k_max", type=float, default=None,
                        help="jump-size prior upper bound (random-jump-size only)")
    p_test.add_argument("--samples", type=int, default=None)
    p_test.add_argument("--null-samples", dest="null_samples", type=int, default=None)
    p_test.add_argument("--seed", type=int, default=None)
    p_test.add_argument("--report", required=True, help="output JSON path")
    p_test.add_argument("--no-refine-mode", action="store_true",
                        help="report the raw cloud argmax without local search")
    p_test.add_argument("--cloud", default=None, help="also write the sample cloud here")
    p_test.add_argument("--config", default=None, help="flat key=value config file")
    p_test.set_defaults(func=cmd_test)

    p_risk = sub.add_parser("risk", help="threshold-exceedance risk queries from a cloud")
    p_risk.add_argument("--data", required=True)
    p_risk.add_argument("--kind", default=Kind.MAXIMA.value, choices=[k.value for k in Kind])
    p_risk.add_argument("--cloud", required=True)
    p_risk.add_argument("--thresholds", required=True,
                        help="comma-separated levels in original data units")
    p_risk.add_argument("--horizon", type=int, required=True)
    p_risk.add_argument("--out-survival", dest="out_survival", required=True)
    p_risk.add_argument("--out-times", dest="out_times", required=True)
    p_risk.add_argument("--times-per-point", action="store_true",
                        help="average per-parameter waiting times instead of "
                             "inverting the marginal exceedance")
    p_risk.set_defaults(func=cmd_risk)

    p_dens = sub.add_parser("density", help="empirical vs mode-fitted density grid")
    p_dens.add_argument("--data", required=True)
    p_dens.add_argument("--kind", default=Kind.MAXIMA.value, choices=[k.value for k in Kind])
    p_dens.add_argument("--cloud", required=True)
    p_dens.add_argument("--grid", type=int, required=True, help="number of grid points")
    p_dens.add_argument("--out", required=True)
    p_dens.set_defaults(func=cmd_density)

    return parser


def cmd_simulate(args) -> int:
    cfg = SimConfig(n=args.n, mu=args.mu, sigma=args.sigma, eta=args.eta,
                    k=args.k, seed=args.seed, s0=args.s0)
    series = simulate_price_path(cfg) if args.path else simulate_returns(cfg)
    _write_column(args.out, series)
    return 0


def _make_hyper(args, config: dict, sd: float) -> Hyperparams:
    beta = float(_resolve(args, config, "beta", float))
    sigma0 = float(_resolve(args, config, "sigma0", float))
    mu0 = float(_resolve(args, config, "mu0", float))
    c = float(_resolve(args, config, "c", float))
    if args.random_jump_size:
        return Hyperparams(beta=beta, sigma0=sigma0, mu0=mu0, c=c,
                           k_max=float(_resolve(args, config, "k_max", float)),
                           variant=Variant.RANDOM_JUMP_SIZE)
    # Fixed variant: a unit jump in the data's original units.
    return Hyperparams(beta=beta, sigma0=sigma0, mu0=mu0, c=c,
                       variant=Variant.FIXED_JUMP_SIZE, fixed_k=1.0 / sd)


def run_test_pipeline(ds: Dataset, args, config: dict) -> tuple[EvidenceReport, SampleCloud]:
    hyper = _make_hyper(args, config, ds.sd)
    samples = int(_resolve(args, config, "samples", int))
    null_samples = int(_resolve(args, config, "null_samples", int))
    seed = int(_resolve(args, config, "seed", int))
    return run_fbst(ds.standardized, hyper, n_support=samples, n_null=null_samples,
                    seed=seed, refine_mode=not args.no_refine_mode, return_cloud=True)


def cmd_test(args) -> int:
    config = _read_config(args.config) if args.config else {}
    ds = read_series(args.data, Kind(args.kind))
    report, cloud = run_test_pipeline(ds, args, config)
    payload = json.dumps(report.to_json_dict(), indent=2) + "\n"
    with open(args.report, "w", newline="\n") as fh:
        fh.write(payload)
    if args.cloud:
        save_cloud(args.cloud, cloud)
    print(f"ev={report.ev:.6g} kappa0={report.kappa0:.6g} "
          f"mode=(eta={report.mode.eta:.4g}, mu={report.mode.mu:.4g}, "
          f"sigma={report.mode.sigma:.4g}, k={report.mode.k:.4g}) ess={report.ess:.4g}")
    return 0


def _load_matching_cloud(path, ds: Dataset) -> SampleCloud:
    cloud = load_cloud(path)
    if cloud.data_digest != data_digest(ds.standardized):
        raise DataError(f"{path}: cloud was built from a different series")
    return cloud


def cmd_risk(args) -> int:
    ds = read_series(args.data, Kind(args.kind))
    cloud = _load_matching_cloud(args.cloud, ds)
    try:
        levels = [float(tok) for tok in args.thresholds.split(",") if tok.strip() != ""]
    except ValueError:
        raise DataError(f"cannot parse thresholds {args.thresholds!r}") from None
    query = RiskQuery(thresholds=tuple(levels), t_max=args.horizon)

    levels_std = [(l - ds.mean) / ds.sd for l in query.thresholds]
    curves = np.column_stack([survival_curve(cloud, lz, query.t_max) for lz in levels_std])
    times = [expected_time(cloud, lz, per_point=args.times_per_point) for lz in levels_std]

    note = ("mean=" + _fmt(ds.mean) + " sd=" + _fmt(ds.sd)
            + " thresholds_std=" + ",".join(_fmt(lz) for lz in levels_std))
    write_survival_csv(args.out_survival, query.thresholds, curves, comment=note)
    write_times_csv(args.out_times, query.thresholds, times, comment=note)
    return 0


def _silverman_bandwidth(x: np.ndarray) -> float:
    n = x.size
    sd = float(np.std(x, ddof=1))
    q75, q25 = np.percentile(x, [75.0, 25.0])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0.0 else sd
    return 0.9 * spread * n ** (-0.2)


def cmd_density(args) -> int:
    ds = read_series(args.data, Kind(args.kind))
    cloud = _load_matching_cloud(args.cloud, ds)
    if args.grid < 2:
        raise DataError(f"grid must have at least 2 points, got {args.grid}")
    mode = posterior_mode(cloud, ds.standardized, refine=True)

    x = ds.values
    h = _silverman_bandwidth(x)
    grid = np.linspace(float(np.min(x)) - 3.0 * h, float(np.max(x)) + 3.0 * h, args.grid)
    z = (grid[:, None] - x[None, :]) / h
    empirical = np.exp(-0.5 * z * z).sum(axis=1) / (x.size * h * math.sqrt(2.0 * math.pi))
    fitted = np.array([mixture_pdf((y - ds.mean) / ds.sd, mode) / ds.sd for y in grid])

    with open(args.out, "w", newline="\n") as fh:
        fh.write(f"# bandwidth={_fmt(h)} mean={_fmt(ds.mean)} sd={_fmt(ds.sd)}\n")
        fh.write("y,empirical,fitted\n")
        for y, e, f in zip(grid, empirical, fitted):
            fh.write(f"{_fmt(y)},{_fmt(e)},{_fmt(f)}\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"jumpfbst: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except EstimationError as exc:
        print(f"jumpfbst: estimation error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except ValueError as exc:
        print(f"jumpfbst: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
