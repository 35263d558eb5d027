"""Command-line front end.

Subcommands: simulate, denoise, estimate, forecast, benchmark. Configuration
comes from a JSON file plus inline ``--set dotted.path=value`` overrides
(values are parsed as JSON, falling back to plain strings). Exit codes:
0 success, 1 runtime or I/O failure, 2 usage error. The environment variable
STABLE_DENOISE_THREADS overrides the benchmark parallelism degree.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ar import read_series, simulate_noisy_dataset, write_series
from .denoise import BlindNoiseRange, draw_blind_noise, n2c, nac, nr2n, stable_n2n, wdn
from .errors import StableDenoiseError
from .estimators import classical_yw, eiv_gaussian, eiv_stable, floc_yw
from .evaluate import forecast_5
from .harness import config_from_dict, model_from_dict, run_experiment, write_results
from .network import TrainConfig

__all__ = ["CliInvocation", "parse_invocation", "run", "main"]

THREADS_ENV = "STABLE_DENOISE_THREADS"


@dataclass
class CliInvocation:
    """A validated command line: subcommand, config source, and options."""

    subcommand: str
    config_path: str | None
    overrides: dict
    seed: int
    out_dir: Path
    options: argparse.Namespace = field(repr=False, default=None)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stable-denoise",
        description="Simulate, denoise, estimate and forecast noisy autoregressive series.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="PATH=VALUE",
            help="override a config entry via dotted path, e.g. --set replicates=20",
        )
        p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
        p.add_argument("--out", default=".", help="output directory (default: current)")

    p_sim = sub.add_parser("simulate", help="simulate paired pure/noisy trajectories")
    common(p_sim)
    p_sim.add_argument("--n", type=int, default=999, help="evaluation length (default 999)")
    p_sim.add_argument("--n-extra", type=int, default=0, help="extra training samples (default 0)")
    p_sim.add_argument("--burn-in", type=int, default=1000, help="burn-in length (default 1000)")

    p_den = sub.add_parser("denoise", help="denoise a series from a CSV file")
    common(p_den)
    p_den.add_argument("--input", required=True, help="noisy series CSV")
    p_den.add_argument(
        "--method",
        required=True,
        choices=["wdn", "nac", "nr2n", "stable_n2n", "n2c"],
    )
    p_den.add_argument("--q", type=int, default=10, help="window length (default 10)")
    p_den.add_argument("--b-prime", type=float, default=0.45, help="input transform exponent")
    p_den.add_argument("--epochs", type=int, default=30)
    p_den.add_argument("--batch-size", type=int, default=10)
    p_den.add_argument("--learning-rate", type=float, default=0.001)
    p_den.add_argument("--weight-decay", type=float, default=0.0001)
    p_den.add_argument("--noise-variance", type=float, help="Gaussian noise variance for nac/nr2n")
    p_den.add_argument("--train-noisy", help="training noisy series CSV (nr2n, n2c)")
    p_den.add_argument("--train-pure", help="training pure series CSV (n2c)")

    p_est = sub.add_parser("estimate", help="estimate AR coefficients from a series")
    common(p_est)
    p_est.add_argument("--input", required=True, help="series CSV")
    p_est.add_argument(
        "--method",
        required=True,
        choices=["classical_yw", "floc_yw", "eiv_gaussian", "eiv_stable"],
    )
    p_est.add_argument("--p", type=int, required=True, help="AR order")
    p_est.add_argument("--B", type=float, default=0.45, help="FLOC exponent B (floc_yw)")
    p_est.add_argument("--b-bar", type=float, default=0.45, help="FLOC exponent for eiv_stable")
    p_est.add_argument("--r", type=int, default=2, help="high-order equation count (EIV)")

    p_fc = sub.add_parser("forecast", help="5-step forecast from a denoised series")
    common(p_fc)
    p_fc.add_argument("--input", required=True, help="denoised series CSV (tail source)")
    p_fc.add_argument("--noisy", required=True, help="noisy series CSV (EIV parameter source)")
    p_fc.add_argument("--p", type=int, required=True, help="AR order")
    p_fc.add_argument(
        "--method", default="eiv_stable", choices=["eiv_gaussian", "eiv_stable"]
    )
    p_fc.add_argument("--b-bar", type=float, default=0.45)
    p_fc.add_argument("--r", type=int, default=2)

    p_bench = sub.add_parser("benchmark", help="run a Monte Carlo benchmark table")
    common(p_bench)

    return parser


def _parse_override(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise ValueError(f"override '{text}' must look like path=value")
    path, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path.strip(), value


def _apply_overrides(payload: dict, overrides: dict) -> dict:
    for path, value in overrides.items():
        node = payload
        keys = path.split(".")
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node[keys[-1]] = value
    return payload


def parse_invocation(argv) -> CliInvocation:
    """Parse argv into a CliInvocation; argparse exits with code 2 on usage errors."""
    options = _build_parser().parse_args(argv)
    overrides = dict(_parse_override(item) for item in options.overrides)
    return CliInvocation(
        subcommand=options.subcommand,
        config_path=options.config,
        overrides=overrides,
        seed=options.seed,
        out_dir=Path(options.out),
        options=options,
    )


def _load_config(invocation: CliInvocation) -> dict:
    payload = {}
    if invocation.config_path:
        with open(invocation.config_path) as fh:
            payload = json.load(fh)
    return _apply_overrides(payload, invocation.overrides)


def _train_config(opt, seed: int) -> TrainConfig:
    return TrainConfig(
        epochs=opt.epochs,
        batch_size=opt.batch_size,
        learning_rate=opt.learning_rate,
        weight_decay=opt.weight_decay,
        seed=seed,
    )


def _cmd_simulate(invocation: CliInvocation) -> None:
    opt = invocation.options
    payload = _load_config(invocation)
    model = model_from_dict(payload)
    rng = np.random.default_rng(invocation.seed)
    data = simulate_noisy_dataset(model, opt.n, opt.n_extra, rng=rng, burn_in=opt.burn_in)
    write_series(data.pure, invocation.out_dir / "pure.csv")
    write_series(data.noisy, invocation.out_dir / "noisy.csv")
    print(f"wrote pure.csv and noisy.csv ({data.pure.size} samples) to {invocation.out_dir}")


def _cmd_denoise(invocation: CliInvocation) -> None:
    opt = invocation.options
    noisy = read_series(opt.input)
    cfg = _train_config(opt, invocation.seed)
    rng = np.random.default_rng(invocation.seed)
    if opt.method == "wdn":
        denoised = wdn(noisy)
    elif opt.method == "stable_n2n":
        denoised = stable_n2n(noisy, cfg, q=opt.q, b_prime=opt.b_prime)
    elif opt.method == "nac":
        noise = opt.noise_variance
        if noise is None:
            noise = draw_blind_noise(BlindNoiseRange(), rng)
        denoised = nac(noisy, noise, cfg, q=opt.q, rng=rng)
    elif opt.method == "nr2n":
        if not opt.train_noisy:
            raise StableDenoiseError("nr2n needs --train-noisy")
        noise = opt.noise_variance
        if noise is None:
            noise = draw_blind_noise(BlindNoiseRange(), rng)
        denoised = nr2n(noisy, read_series(opt.train_noisy), noise, cfg, q=opt.q, rng=rng)
    else:  # n2c
        if not (opt.train_noisy and opt.train_pure):
            raise StableDenoiseError("n2c needs --train-noisy and --train-pure")
        denoised = n2c(noisy, read_series(opt.train_noisy), read_series(opt.train_pure), cfg, q=opt.q)
    write_series(denoised, invocation.out_dir / "denoised.csv")
    print(f"wrote denoised.csv ({denoised.size} samples) to {invocation.out_dir}")


def _run_estimator(method: str, series, opt):
    if method == "classical_yw":
        return classical_yw(series, opt.p)
    if method == "floc_yw":
        return floc_yw(series, opt.p, b_exp=opt.B)
    if method == "eiv_gaussian":
        return eiv_gaussian(series, opt.p, r=opt.r)
    return eiv_stable(series, opt.p, r=opt.r, b_bar=opt.b_bar)


def _cmd_estimate(invocation: CliInvocation) -> None:
    opt = invocation.options
    series = read_series(opt.input)
    result = _run_estimator(opt.method, series, opt)
    theta_text = ", ".join(f"{v:.6f}" for v in result.theta_hat)
    print(f"{result.method}: theta_hat = [{theta_text}]")
    if result.noise_level is not None:
        print(f"noise_level = {result.noise_level:.6f}")
    out = invocation.out_dir / "estimation.csv"
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["parameter", "value"])
        writer.writerow(["method", result.method])
        for i, v in enumerate(result.theta_hat, start=1):
            writer.writerow([f"theta_{i}", repr(float(v))])
        if result.noise_level is not None:
            writer.writerow(["noise_level", repr(float(result.noise_level))])
    print(f"wrote {out}")


def _cmd_forecast(invocation: CliInvocation) -> None:
    opt = invocation.options
    denoised = read_series(opt.input)
    noisy = read_series(opt.noisy)
    if opt.method == "eiv_gaussian":
        result = eiv_gaussian(noisy, opt.p, r=opt.r)
    else:
        result = eiv_stable(noisy, opt.p, r=opt.r, b_bar=opt.b_bar)
    values = forecast_5(denoised[-opt.p :], result.theta_hat)
    write_series(values, invocation.out_dir / "forecast.csv")
    print(f"forecast = [{', '.join(f'{v:.6f}' for v in values)}]")
    print(f"wrote forecast.csv to {invocation.out_dir}")


def _cmd_benchmark(invocation: CliInvocation) -> None:
    payload = _load_config(invocation)
    if "master_seed" not in payload:
        payload["master_seed"] = invocation.seed
    cfg = config_from_dict(payload)
    threads = os.environ.get(THREADS_ENV)
    if threads:
        cfg.n_jobs = int(threads)
    table = run_experiment(cfg)
    detail = invocation.out_dir / "detail.csv"
    summary = invocation.out_dir / "summary.csv"
    write_results(table, detail, summary)
    for method in table.methods():
        print(
            f"{method}: mean param MAE {table.mean_param_mae(method):.4f}, "
            f"mean forecast MAE {table.mean_forecast_mae(method):.4f}, "
            f"excluded {table.excluded(method)}/{table.replicate_count(method)}"
        )
    print(f"wrote {detail} and {summary}")


_COMMANDS = {
    "simulate": _cmd_simulate,
    "denoise": _cmd_denoise,
    "estimate": _cmd_estimate,
    "forecast": _cmd_forecast,
    "benchmark": _cmd_benchmark,
}


def run(invocation: CliInvocation) -> int:
    """Dispatch an invocation; returns the process exit code."""
    try:
        invocation.out_dir.mkdir(parents=True, exist_ok=True)
        _COMMANDS[invocation.subcommand](invocation)
        return 0
    except (StableDenoiseError, OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    invocation = parse_invocation(sys.argv[1:] if argv is None else argv)
    return run(invocation)
