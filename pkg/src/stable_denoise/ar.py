"""Causal AR(p) simulation with stable innovations and additive stable noise.

A spec is causal when theta(z) = 1 - theta_1 z - ... - theta_p z^p has no
root in the closed unit disk; simulation runs the recursion from zero
initial conditions and discards a burn-in prefix. `simulate_noisy_dataset`
packages one long trajectory into the segments the experiments consume:
an evaluation window, an 11-point forecast margin, and optional extra
paired samples for the dataset-based denoisers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .errors import ModelError, ParameterError, ShapeError
from .stable import StableParams, sample_stable

__all__ = [
    "ArSpec",
    "NoisyModelSpec",
    "ArDataset",
    "FORECAST_MARGIN",
    "check_causality",
    "simulate_ar",
    "corrupt",
    "simulate_noisy_dataset",
    "write_series",
    "read_series",
]

# points kept past the evaluation window; 5 feed the forecast metric
FORECAST_MARGIN = 11

DEFAULT_BURN_IN = 1000


def check_causality(coefficients) -> tuple[bool, float]:
    """Return (causal, min |root|) for theta(z) = 1 - sum theta_j z^j.

    Causal means every root lies strictly outside the unit circle. An
    all-zero coefficient vector has no roots and counts as causal
    (min modulus reported as inf).
    """
    theta = np.atleast_1d(np.asarray(coefficients, dtype=float))
    if theta.ndim != 1 or theta.size == 0:
        raise ShapeError("coefficients must be a nonempty 1-D vector")
    # numpy wants highest degree first: [-theta_p, ..., -theta_1, 1]
    poly = np.concatenate([-theta[::-1], [1.0]])
    roots = np.roots(poly)
    if roots.size == 0:
        return True, float("inf")
    min_mod = float(np.min(np.abs(roots)))
    return min_mod > 1.0, min_mod


def _require_symmetric(params: StableParams, what: str) -> None:
    if not params.is_symmetric:
        raise ParameterError(f"{what} must be symmetric (beta = 0, mu = 0)")
    if not params.alpha > 1.0:
        raise ParameterError(f"{what} must have alpha > 1, got {params.alpha}")


@dataclass(frozen=True)
class ArSpec:
    """Order, coefficients and innovation law of a causal SaS-AR(p) model."""

    coefficients: tuple
    innovation: StableParams

    def __post_init__(self):
        theta = tuple(float(c) for c in np.atleast_1d(self.coefficients))
        object.__setattr__(self, "coefficients", theta)
        _require_symmetric(self.innovation, "innovation law")
        causal, min_mod = check_causality(theta)
        if not causal:
            raise ModelError(
                f"non-causal AR coefficients: smallest root modulus {min_mod:.6g} <= 1"
            )

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @property
    def theta(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)


@dataclass(frozen=True)
class NoisyModelSpec:
    """A causal AR spec plus the law of the additive observation noise."""

    ar: ArSpec
    noise: StableParams

    def __post_init__(self):
        _require_symmetric(self.noise, "additive noise law")

    @property
    def is_gaussian(self) -> bool:
        return self.ar.innovation.is_gaussian and self.noise.is_gaussian

    @property
    def noise_scale(self) -> float:
        """Noise descriptor for result tables: variance if Gaussian, else sigma."""
        if self.noise.is_gaussian:
            return self.noise.gaussian_variance()
        return self.noise.sigma


def simulate_ar(
    spec: ArSpec,
    n: int,
    burn_in: int = DEFAULT_BURN_IN,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Simulate n samples of the AR recursion, zero-started, burn-in dropped."""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    if burn_in < 0:
        raise ParameterError(f"burn_in must be nonnegative, got {burn_in}")
    if rng is None:
        rng = np.random.default_rng()
    xi = sample_stable(spec.innovation, n + burn_in, rng)
    # X_t - sum theta_j X_{t-j} = xi_t is an all-pole filter driven by xi
    denom = np.concatenate([[1.0], -spec.theta])
    x = lfilter([1.0], denom, xi)
    return x[burn_in:]


def corrupt(
    pure: np.ndarray, noise: StableParams, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Add i.i.d. stable noise; returns (noisy, noise_path)."""
    _require_symmetric(noise, "additive noise law")
    pure = np.asarray(pure, dtype=float)
    noise_path = sample_stable(noise, pure.size, rng)
    return pure + noise_path, noise_path


@dataclass(frozen=True)
class ArDataset:
    """One simulated trajectory split into evaluation / margin / extra segments."""

    pure: np.ndarray = field(compare=False)
    noisy: np.ndarray = field(compare=False)
    n: int = 0
    n_extra: int = 0

    @property
    def pure_eval(self) -> np.ndarray:
        return self.pure[: self.n]

    @property
    def noisy_eval(self) -> np.ndarray:
        return self.noisy[: self.n]

    @property
    def forecast_truth(self) -> np.ndarray:
        return self.pure[self.n : self.n + 5]

    @property
    def extra_pure(self) -> np.ndarray:
        return self.pure[self.n + FORECAST_MARGIN :]

    @property
    def extra_noisy(self) -> np.ndarray:
        return self.noisy[self.n + FORECAST_MARGIN :]


def simulate_noisy_dataset(
    spec: NoisyModelSpec,
    n: int,
    n_extra: int = 0,
    rng: np.random.Generator | None = None,
    burn_in: int = DEFAULT_BURN_IN,
) -> ArDataset:
    """Simulate paired pure/noisy series of length n + 11 + n_extra.

    The innovation and noise streams are split deterministically from `rng`,
    so identical seeding reproduces the dataset bit for bit.
    """
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    if n_extra < 0:
        raise ParameterError(f"n_extra must be nonnegative, got {n_extra}")
    if rng is None:
        rng = np.random.default_rng()
    innovation_rng, noise_rng = rng.spawn(2)
    total = n + FORECAST_MARGIN + n_extra
    pure = simulate_ar(spec.ar, total, burn_in=burn_in, rng=innovation_rng)
    noisy, _ = corrupt(pure, spec.noise, noise_rng)
    return ArDataset(pure=pure, noisy=noisy, n=n, n_extra=n_extra)


def write_series(values, path) -> None:
    """Write a series as a one-column CSV with header row 'value'."""
    values = np.asarray(values, dtype=float).ravel()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value"])
        for v in values:
            writer.writerow([repr(float(v))])


def read_series(path) -> np.ndarray:
    """Read a one-column CSV written by `write_series` (header 'value')."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0].strip().lower() != "value":
            raise ParameterError(f"{path}: expected a one-column CSV with header 'value'")
        values = [float(row[0]) for row in reader if row]
    return np.asarray(values, dtype=float)
