"""Univariate alpha-stable distributions: parameters, sampling, signed powers.

Sampling uses the Chambers-Mallows-Stuck transformation of a uniform and an
exponential variate, which is exact and rejection-free for every admissible
(alpha, beta). The parameterization is the characteristic-function form

    E exp(izX) = exp{-sigma^a |z|^a (1 - i beta sign(z) tan(pi a/2)) + i mu z}

for alpha != 1, with the usual logarithmic correction at alpha = 1. The
symmetric case (beta = 0, mu = 0) is what the rest of the package consumes;
alpha = 2 then means a centered Gaussian with variance 2 sigma^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = ["StableParams", "sample_stable", "signed_power"]


@dataclass(frozen=True)
class StableParams:
    """The four parameters (alpha, sigma, beta, mu) of an alpha-stable law."""

    alpha: float
    sigma: float
    beta: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise ParameterError(f"alpha must be in (0, 2], got {self.alpha}")
        if not self.sigma > 0.0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if not -1.0 <= self.beta <= 1.0:
            raise ParameterError(f"beta must be in [-1, 1], got {self.beta}")
        if not np.isfinite(self.mu):
            raise ParameterError(f"mu must be finite, got {self.mu}")

    @property
    def is_symmetric(self) -> bool:
        return self.beta == 0.0 and self.mu == 0.0

    @property
    def is_gaussian(self) -> bool:
        return self.alpha == 2.0

    def gaussian_variance(self) -> float:
        """Variance of the law, defined only for alpha = 2 (equals 2 sigma^2)."""
        if not self.is_gaussian:
            raise ParameterError("variance is undefined for alpha < 2")
        return 2.0 * self.sigma**2

    @classmethod
    def gaussian(cls, variance: float) -> "StableParams":
        """Centered Gaussian N(0, variance) expressed as a stable law."""
        if not variance > 0.0:
            raise ParameterError(f"variance must be positive, got {variance}")
        return cls(alpha=2.0, sigma=float(np.sqrt(variance / 2.0)))


def sample_stable(params: StableParams, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `count` i.i.d. samples from the given stable law.

    Chambers-Mallows-Stuck: with U uniform on (-pi/2, pi/2) and W standard
    exponential, a trigonometric transform of (U, W) is exactly stable.
    Deterministic given the state of `rng`.
    """
    if not isinstance(count, (int, np.integer)) or count < 1:
        raise ParameterError(f"count must be a positive integer, got {count}")
    alpha, beta, sigma, mu = params.alpha, params.beta, params.sigma, params.mu

    u = rng.uniform(-np.pi / 2.0, np.pi / 2.0, size=count)
    w = rng.standard_exponential(count)

    if alpha == 1.0:
        half_pi = np.pi / 2.0
        t = (half_pi + beta * u) * np.tan(u)
        if beta != 0.0:
            t -= beta * np.log(half_pi * w * np.cos(u) / (half_pi + beta * u))
            shift = mu + (2.0 / np.pi) * beta * sigma * np.log(sigma)
        else:
            shift = mu
        return sigma * (2.0 / np.pi) * t + shift

    # alpha != 1 branch; for beta = 0 this collapses to
    # sin(alpha U) / cos(U)^(1/alpha) * (cos((1-alpha)U) / W)^((1-alpha)/alpha)
    b_ab = np.arctan(beta * np.tan(np.pi * alpha / 2.0)) / alpha
    s_ab = (1.0 + (beta * np.tan(np.pi * alpha / 2.0)) ** 2) ** (1.0 / (2.0 * alpha))
    x = (
        s_ab
        * np.sin(alpha * (u + b_ab))
        / np.cos(u) ** (1.0 / alpha)
        * (np.cos(u - alpha * (u + b_ab)) / w) ** ((1.0 - alpha) / alpha)
    )
    return sigma * x + mu


def signed_power(x, exponent: float):
    """Signed power |x|^exponent * sign(x), with sign(0) = 0.

    Odd in x; the identity map at exponent 1. Accepts scalars or arrays.
    """
    if exponent < 0.0:
        raise ParameterError(f"exponent must be nonnegative, got {exponent}")
    x = np.asarray(x, dtype=float)
    out = np.sign(x) * np.abs(x) ** exponent
    if out.ndim == 0:
        return float(out)
    return out
