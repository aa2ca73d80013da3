"""Command-line interface.

Subcommands: mc-size, mc-power, epa, spa, ci, hill, simulate.
Exit codes: 0 success, 1 validation/config error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import dataio
from .dgp import Ar1Spec, SimulationError, simulate_ar1
from .evaluate import pairwise_epa_matrix, spa_loss_matrix
from .experiments import (
    ExperimentConfig,
    make_noise,
    run_power_experiment,
    run_rejection_experiment,
)
from .limits import hill_plot
from .losses import EstimationError, fit_garch11, garch_var_forecast, rw_quantile_forecast
from .rng import RngStream
from .series import TimeSeries
from .subsampling import SubsampleConfig, mean_confidence_interval, spa_test

CONFIG_KEYS = {
    "kappas": lambda s: tuple(float(v) for v in _split(s)),
    "deltas": lambda s: tuple(float(v) for v in _split(s)),
    "sample_sizes": lambda s: tuple(int(v) for v in _split(s)),
    "noise": str,
    "p_plus": float,
    "phi": float,
    "replications": int,
    "level": float,
    "tests": lambda s: tuple(_split(s)),
    "seed": int,
    "burn_in": int,
    "block": lambda s: None if s == "auto" else int(s),
    "dm_lag": lambda s: "auto" if s == "auto" else int(s),
}


def _split(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def load_config(path: str) -> dict:
    """Parse a flat key = value config file; unknown keys are errors."""
    out: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise ValueError(
                    f"{path}:{lineno}: unknown key {key!r} "
                    f"(valid: {', '.join(sorted(CONFIG_KEYS))})"
                )
            out[key] = CONFIG_KEYS[key](value.strip())
    return out


def _experiment_config(args) -> ExperimentConfig:
    options = load_config(args.config)
    if args.seed is not None:
        options["seed"] = args.seed
    if args.block is not None:
        options["block"] = args.block
    if args.level is not None:
        options["level"] = args.level
    options["workers"] = args.workers
    return ExperimentConfig(**options)


def _native_forecasts(returns: TimeSeries, args) -> list:
    """RW-H and GARCH-Normal forecasts the CLI computes itself."""
    out = []
    for window in (args.rw or []):
        out.append(rw_quantile_forecast(returns, window, args.tau))
    if args.garch_normal:
        if args.split is None:
            raise ValueError("--garch-normal needs --split to mark the in-sample end")
        if returns.timestamps is None:
            raise ValueError("returns file has no dates; cannot apply --split")
        n_in = sum(1 for d in returns.timestamps if d < args.split)
        if n_in < 250:
            raise ValueError(f"only {n_in} in-sample observations before {args.split}")
        params = fit_garch11(returns.values[:n_in])
        out.append(garch_var_forecast(params, returns, args.tau))
    return out


def _evaluation_window(returns: TimeSeries, forecasts, split: str | None):
    """Restrict to out-of-sample dates when a split is given."""
    if split is None:
        return returns, forecasts
    if returns.timestamps is None:
        raise ValueError("returns file has no dates; cannot apply --split")
    keep = [i for i, d in enumerate(returns.timestamps) if d >= split]
    if not keep:
        raise ValueError(f"no observations on or after {split}")
    lo = keep[0]
    target = TimeSeries(returns.values[lo:], returns.timestamps[lo:])
    cut = [type(f)(f.method, f.values[lo:], f.tau) for f in forecasts]
    return target, cut


def _cmd_mc_size(args) -> int:
    rows = run_rejection_experiment(_experiment_config(args))
    dataio.write_experiment_rows(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_mc_power(args) -> int:
    rows = run_power_experiment(_experiment_config(args))
    dataio.write_experiment_rows(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_epa(args) -> int:
    loaded = dataio.load_returns(args.returns)
    if loaded.dropped_zeros:
        print(f"dropped {loaded.dropped_zeros} zero-return rows")
    returns = loaded.series
    forecasts = _native_forecasts(returns, args)
    if args.forecasts:
        forecasts.extend(dataio.load_forecasts(args.forecasts, args.tau, returns))
    target, forecasts = _evaluation_window(returns, forecasts, args.split)
    report = pairwise_epa_matrix(
        target, forecasts, level=args.level, dm_lag=args.lag, block=args.block
    )
    dataio.write_table(args.out, report.ROW_HEADER, report.rows())
    print(
        f"compared {len(report.methods)} methods on n={report.n} observations "
        f"(block {report.block_size}); wrote {args.out}"
    )
    return 0


def _cmd_spa(args) -> int:
    loaded = dataio.load_returns(args.returns)
    returns = loaded.series
    forecasts = _native_forecasts(returns, args)
    if args.forecasts:
        forecasts.extend(dataio.load_forecasts(args.forecasts, args.tau, returns))
    target, forecasts = _evaluation_window(returns, forecasts, args.split)
    matrix, competitors = spa_loss_matrix(target, forecasts, args.benchmark)
    report = spa_test(matrix, SubsampleConfig(block=args.block, level=args.level))
    verdict = "rejected" if report.reject else "not rejected"
    print(
        f"SPA of {args.benchmark!r} over {len(competitors)} competitors: "
        f"V = {report.statistic:.4f}, critical {report.critical_upper:.4f} "
        f"(level {report.nominal_level}), superiority {verdict}"
    )
    if args.out:
        dataio.write_table(
            args.out,
            ["benchmark", "competitors", "statistic", "critical", "level", "reject"],
            [[args.benchmark, ";".join(competitors), repr(report.statistic),
              repr(report.critical_upper), report.nominal_level, int(report.reject)]],
        )
    return 0


def _cmd_ci(args) -> int:
    series = dataio.load_series(args.input)
    ci = mean_confidence_interval(
        series, SubsampleConfig(block=args.block, level=args.level)
    )
    flag = " (degenerate)" if ci.degenerate else ""
    print(
        f"mean CI at level {ci.level}: [{ci.lower:.6g}, {ci.upper:.6g}] "
        f"block {ci.block_size}{flag}"
    )
    if args.out:
        dataio.write_table(
            args.out,
            ["lower", "upper", "level", "block", "degenerate"],
            [[repr(ci.lower), repr(ci.upper), ci.level, ci.block_size, int(ci.degenerate)]],
        )
    return 0


def _cmd_hill(args) -> int:
    series = dataio.load_series(args.input)
    table = hill_plot(series)
    rows = [[int(k), repr(float(est))] for k, est in table]
    dataio.write_table(args.out, ["k", "kappa_hat"], rows)
    print(f"wrote {len(rows)} Hill estimates to {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    spec = Ar1Spec(
        delta=args.delta,
        phi=args.phi,
        noise=make_noise(args.family, args.kappa, args.p_plus),
        n=args.n,
        stream=RngStream(args.seed),
        burn_in=args.burn_in,
    )
    series = simulate_ar1(spec)
    dataio.write_series(args.out, series)
    print(f"wrote {len(series)} observations to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailtest",
        description="Predictive ability tests that stay valid under heavy tails",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, level_default=0.05):
        p.add_argument("--block", type=int, default=None,
                       help="subsampling block override (default 1.5*sqrt(n))")
        p.add_argument("--level", type=float, default=level_default,
                       help="nominal level eta")

    for name, fn in (("mc-size", _cmd_mc_size), ("mc-power", _cmd_mc_power)):
        p = sub.add_parser(name, help=f"run the {name} Monte Carlo experiment")
        p.add_argument("--config", required=True, help="flat key=value config file")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", required=True, help="output CSV path")
        common(p, level_default=None)  # None: keep the config file's level
        p.set_defaults(fn=fn)

    p = sub.add_parser("epa", help="pairwise equal-predictive-ability matrix")
    p.add_argument("--returns", required=True, help="(date, return) CSV")
    p.add_argument("--forecasts", help="(date, method...) CSV of external forecasts")
    p.add_argument("--rw", type=lambda s: [int(v) for v in _split(s)], default=None,
                   help="comma-separated rolling windows, e.g. 125,250,500")
    p.add_argument("--garch-normal", action="store_true",
                   help="add the Gaussian GARCH(1,1) VaR forecast")
    p.add_argument("--split", help="ISO date: fit before it, evaluate from it on")
    p.add_argument("--tau", type=float, default=0.05, help="risk level")
    p.add_argument("--lag", type=int, default=20, help="fixed HAC lag for the DM test")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(fn=_cmd_epa)

    p = sub.add_parser("spa", help="superior-predictive-ability test")
    p.add_argument("--returns", required=True)
    p.add_argument("--forecasts", help="(date, method...) CSV of external forecasts")
    p.add_argument("--rw", type=lambda s: [int(v) for v in _split(s)], default=None)
    p.add_argument("--garch-normal", action="store_true")
    p.add_argument("--split")
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--benchmark", required=True, help="benchmark method name")
    p.add_argument("--out")
    common(p)
    p.set_defaults(fn=_cmd_spa)

    p = sub.add_parser("ci", help="subsampling confidence interval for the mean")
    p.add_argument("--input", required=True, help="(value) or (date, value) CSV")
    p.add_argument("--out")
    common(p)
    p.set_defaults(fn=_cmd_ci)

    p = sub.add_parser("hill", help="Hill plot data (k, kappa_hat) as CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_hill)

    p = sub.add_parser("simulate", help="simulate an AR(1) with configurable noise")
    p.add_argument("--family", default="stable-sym")
    p.add_argument("--kappa", type=float, default=1.5)
    p.add_argument("--p-plus", type=float, default=0.9, dest="p_plus")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.5)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=10_000, dest="burn_in")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, FileNotFoundError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (EstimationError, SimulationError, FloatingPointError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
