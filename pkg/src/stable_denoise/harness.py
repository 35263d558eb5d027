"""Monte Carlo orchestration: simulate, denoise, estimate, forecast, tabulate.

One ExperimentConfig describes a single noise setting. Each replicate draws
its seeds from (master_seed, replicate, role) seed sequences so that no two
random consumers ever share a stream and reruns are bit-reproducible even
under parallel execution. Per-trajectory failures are recorded as flagged
rows and excluded from the means; they never abort the table.
"""

from __future__ import annotations

import csv
import math
import os
import time
from dataclasses import dataclass, field, replace

import numpy as np
from joblib import Parallel, delayed

from .ar import ArSpec, NoisyModelSpec, simulate_noisy_dataset
from .denoise import (
    BlindNoiseRange,
    draw_blind_noise,
    n2c,
    nac,
    nr2n,
    stable_n2n,
    wdn,
)
from .errors import ParameterError, StableDenoiseError
from .estimators import classical_yw, eiv_gaussian, eiv_stable, floc_yw
from .evaluate import forecast_5, forecast_mae, param_mae
from .network import TrainConfig
from .stable import StableParams

__all__ = [
    "METHODS",
    "ExperimentConfig",
    "ReplicateRecord",
    "ResultTable",
    "run_experiment",
    "write_results",
    "read_results",
    "model_from_dict",
    "config_from_dict",
]

METHODS = ("wdn", "nac", "nr2n", "stable_n2n", "n2c")

_METHOD_IDS = {name: i for i, name in enumerate(METHODS)}

# role tags for seed derivation
_ROLE_DATA = 0
_ROLE_BLIND = 1
_ROLE_METHOD = 2

DETAIL_HEADER = [
    "noise_alpha",
    "noise_sigma_or_var",
    "method",
    "replicate",
    "param_mae",
    "forecast_mae",
    "flag",
]

SUMMARY_HEADER = [
    "noise_alpha",
    "noise_sigma_or_var",
    "method",
    "replicates",
    "mean_param_mae",
    "mean_forecast_mae",
    "excluded",
    "wall_time_s",
]


@dataclass
class ExperimentConfig:
    """Everything one benchmark row needs, with the reference defaults."""

    model: NoisyModelSpec
    n: int = 999
    n_extra: int = 999
    burn_in: int = 1000
    methods: tuple = ("wdn",)
    replicates: int = 20
    train: TrainConfig = field(default_factory=TrainConfig)
    b_prime: float | None = None  # None: 1 for Gaussian models, 0.45 otherwise
    b_bar: float = 0.45
    r: int = 2
    q: int = 10
    blind_range: BlindNoiseRange = field(default_factory=BlindNoiseRange)
    master_seed: int = 0
    estimator: str | None = None  # None: classical for Gaussian models, floc otherwise
    floc_b: float = 0.45
    n_jobs: int | None = None  # None: all available cores

    def __post_init__(self):
        self.methods = tuple(self.methods)
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ParameterError(f"unknown methods: {sorted(unknown)}")
        if not self.methods:
            raise ParameterError("at least one method is required")
        if self.replicates < 1:
            raise ParameterError("replicates must be positive")
        if self.estimator not in (None, "classical", "floc"):
            raise ParameterError(f"estimator must be 'classical' or 'floc', got {self.estimator}")

    @property
    def effective_b_prime(self) -> float:
        if self.b_prime is not None:
            return self.b_prime
        return 1.0 if self.model.is_gaussian else 0.45

    @property
    def effective_estimator(self) -> str:
        if self.estimator is not None:
            return self.estimator
        return "classical" if self.model.is_gaussian else "floc"


@dataclass
class ReplicateRecord:
    """Detail row: one method on one replicate. Empty flag means retained."""

    method: str
    replicate: int
    param_mae: float | None
    forecast_mae: float | None
    flag: str = ""


@dataclass
class ResultTable:
    """All replicate records for one noise setting, plus per-method wall time."""

    noise_alpha: float
    noise_scale: float
    records: list
    wall_times: dict = field(default_factory=dict, compare=False)

    def methods(self) -> list:
        seen = []
        for rec in self.records:
            if rec.method not in seen:
                seen.append(rec.method)
        return seen

    def _retained(self, method: str, attr: str) -> list:
        return [
            getattr(r, attr)
            for r in self.records
            if r.method == method and getattr(r, attr) is not None
        ]

    def param_maes(self, method: str) -> list:
        return self._retained(method, "param_mae")

    def forecast_maes(self, method: str) -> list:
        return self._retained(method, "forecast_mae")

    def mean_param_mae(self, method: str) -> float:
        values = self.param_maes(method)
        return float(np.mean(values)) if values else float("nan")

    def mean_forecast_mae(self, method: str) -> float:
        values = self.forecast_maes(method)
        return float(np.mean(values)) if values else float("nan")

    def excluded(self, method: str) -> int:
        return sum(1 for r in self.records if r.method == method and r.flag)

    def replicate_count(self, method: str) -> int:
        return sum(1 for r in self.records if r.method == method)


def _seed_seq(master_seed: int, replicate: int, *role) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=(int(master_seed), int(replicate), *role))


def _estimate(cfg: ExperimentConfig, series) -> np.ndarray:
    p = cfg.model.ar.order
    if cfg.effective_estimator == "classical":
        return classical_yw(series, p).theta_hat
    return floc_yw(series, p, b_exp=cfg.floc_b).theta_hat


def _run_replicate(cfg: ExperimentConfig, m: int) -> tuple[list, dict]:
    """All requested methods on replicate m; returns (records, wall times)."""
    data_rng = np.random.default_rng(_seed_seq(cfg.master_seed, m, _ROLE_DATA))
    data = simulate_noisy_dataset(
        cfg.model, cfg.n, cfg.n_extra, rng=data_rng, burn_in=cfg.burn_in
    )
    y = data.noisy_eval
    theta_true = cfg.model.ar.theta
    p = cfg.model.ar.order
    gaussian = cfg.model.is_gaussian

    # the forecast coefficients come from EIV on the noisy observations;
    # for Gaussian models the same call provides the NAC/NR2N noise variance
    eiv_flag = ""
    theta_eiv = None
    noise_variance = None
    try:
        if gaussian:
            eiv = eiv_gaussian(y, p, r=cfg.r)
            noise_variance = eiv.noise_level
        else:
            eiv = eiv_stable(y, p, r=cfg.r, b_bar=cfg.b_bar)
        theta_eiv = eiv.theta_hat
    except (StableDenoiseError, np.linalg.LinAlgError) as exc:
        eiv_flag = f"eiv:{type(exc).__name__}"

    if gaussian:
        simulated_noise = noise_variance if noise_variance is not None else None
    else:
        blind_rng = np.random.default_rng(_seed_seq(cfg.master_seed, m, _ROLE_BLIND))
        simulated_noise = draw_blind_noise(cfg.blind_range, blind_rng)

    records, wall_times = [], {}
    for method in cfg.methods:
        t0 = time.perf_counter()
        flag = ""
        pm = fm = None
        try:
            denoised = _run_method(cfg, method, data, simulated_noise, m)
            theta_hat = _estimate(cfg, denoised)
            pm = param_mae(theta_true, theta_hat)
            if theta_eiv is None:
                flag = eiv_flag
            else:
                forecast = forecast_5(denoised[-p:], theta_eiv)
                fm = forecast_mae(forecast, data.forecast_truth)
        except (StableDenoiseError, np.linalg.LinAlgError) as exc:
            flag = f"{method}:{type(exc).__name__}"
        records.append(
            ReplicateRecord(method=method, replicate=m, param_mae=pm, forecast_mae=fm, flag=flag)
        )
        wall_times[method] = wall_times.get(method, 0.0) + time.perf_counter() - t0
    return records, wall_times


def _run_method(cfg: ExperimentConfig, method: str, data, simulated_noise, m: int):
    if method == "wdn":
        return wdn(data.noisy_eval)
    method_ss = _seed_seq(cfg.master_seed, m, _ROLE_METHOD, _METHOD_IDS[method])
    train_ss, noise_ss = method_ss.spawn(2)
    train_cfg = replace(cfg.train, seed=int(train_ss.generate_state(1)[0]))
    rng = np.random.default_rng(noise_ss)
    y = data.noisy_eval
    if method == "stable_n2n":
        return stable_n2n(y, train_cfg, q=cfg.q, b_prime=cfg.effective_b_prime)
    if method == "nac":
        if simulated_noise is None:
            raise ParameterError("nac requires a noise law or variance estimate")
        return nac(y, simulated_noise, train_cfg, q=cfg.q, rng=rng)
    if method == "nr2n":
        if simulated_noise is None:
            raise ParameterError("nr2n requires a noise law or variance estimate")
        return nr2n(y, data.extra_noisy, simulated_noise, train_cfg, q=cfg.q, rng=rng)
    if method == "n2c":
        return n2c(y, data.extra_noisy, data.extra_pure, train_cfg, q=cfg.q)
    raise ParameterError(f"unknown method {method}")


def run_experiment(cfg: ExperimentConfig) -> ResultTable:
    """Run every requested method on every replicate and aggregate."""
    n_jobs = cfg.n_jobs if cfg.n_jobs is not None else (os.cpu_count() or 1)
    if n_jobs == 1:
        results = [_run_replicate(cfg, m) for m in range(cfg.replicates)]
    else:
        results = Parallel(n_jobs=n_jobs)(
            delayed(_run_replicate)(cfg, m) for m in range(cfg.replicates)
        )
    records, wall_times = [], {}
    for recs, times in results:
        records.extend(recs)
        for method, elapsed in times.items():
            wall_times[method] = wall_times.get(method, 0.0) + elapsed
    table = ResultTable(
        noise_alpha=cfg.model.noise.alpha,
        noise_scale=cfg.model.noise_scale,
        records=records,
        wall_times=wall_times,
    )
    return table


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return ""
    return repr(float(value))


def write_results(table: ResultTable, detail_path, summary_path) -> None:
    """Write the per-replicate detail CSV and the companion summary of means."""
    try:
        with open(detail_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(DETAIL_HEADER)
            for rec in table.records:
                writer.writerow(
                    [
                        _fmt(table.noise_alpha),
                        _fmt(table.noise_scale),
                        rec.method,
                        rec.replicate,
                        _fmt(rec.param_mae),
                        _fmt(rec.forecast_mae),
                        rec.flag,
                    ]
                )
        with open(summary_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SUMMARY_HEADER)
            for method in table.methods():
                writer.writerow(
                    [
                        _fmt(table.noise_alpha),
                        _fmt(table.noise_scale),
                        method,
                        table.replicate_count(method),
                        _fmt(table.mean_param_mae(method)),
                        _fmt(table.mean_forecast_mae(method)),
                        table.excluded(method),
                        f"{table.wall_times.get(method, 0.0):.3f}",
                    ]
                )
    except OSError as exc:
        raise OSError(f"writing results near {detail_path}: {exc}") from exc


def read_results(detail_path) -> ResultTable:
    """Parse a detail CSV back into a ResultTable (wall times are not stored)."""
    records = []
    noise_alpha = noise_scale = float("nan")
    with open(detail_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != DETAIL_HEADER:
            raise ParameterError(f"{detail_path}: unexpected header {header}")
        for row in reader:
            if not row:
                continue
            noise_alpha = float(row[0])
            noise_scale = float(row[1])
            records.append(
                ReplicateRecord(
                    method=row[2],
                    replicate=int(row[3]),
                    param_mae=float(row[4]) if row[4] else None,
                    forecast_mae=float(row[5]) if row[5] else None,
                    flag=row[6],
                )
            )
    return ResultTable(noise_alpha=noise_alpha, noise_scale=noise_scale, records=records)


def _stable_from_dict(payload: dict) -> StableParams:
    data = dict(payload)
    if "variance" in data:
        if data.get("alpha", 2.0) != 2.0:
            raise ParameterError("'variance' shorthand is only valid for alpha = 2")
        return StableParams.gaussian(float(data["variance"]))
    return StableParams(
        alpha=float(data["alpha"]),
        sigma=float(data["sigma"]),
        beta=float(data.get("beta", 0.0)),
        mu=float(data.get("mu", 0.0)),
    )


def model_from_dict(payload: dict) -> NoisyModelSpec:
    """Build a model spec from the JSON schema used by the CLI.

    Expected keys: theta (list), innovation and noise (each with alpha and
    sigma, or variance as a Gaussian shorthand).
    """
    ar = ArSpec(
        coefficients=tuple(float(c) for c in payload["theta"]),
        innovation=_stable_from_dict(payload["innovation"]),
    )
    return NoisyModelSpec(ar=ar, noise=_stable_from_dict(payload["noise"]))


def config_from_dict(payload: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from a JSON payload (see README for schema)."""
    data = dict(payload)
    kwargs = {"model": model_from_dict(data.pop("model"))}
    if "train" in data:
        kwargs["train"] = TrainConfig(**data.pop("train"))
    if "blind_range" in data:
        kwargs["blind_range"] = BlindNoiseRange(**data.pop("blind_range"))
    if "methods" in data:
        kwargs["methods"] = tuple(data.pop("methods"))
    for key in (
        "n",
        "n_extra",
        "burn_in",
        "replicates",
        "b_prime",
        "b_bar",
        "r",
        "q",
        "master_seed",
        "estimator",
        "floc_b",
        "n_jobs",
    ):
        if key in data:
            kwargs[key] = data.pop(key)
    if data:
        raise ParameterError(f"unknown config keys: {sorted(data)}")
    return ExperimentConfig(**kwargs)
