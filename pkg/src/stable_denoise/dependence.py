"""Empirical dependence measures: autocovariance and fractional lower-order
covariance (FLOC).

Both use the same windowing: with 1-based indices, the lag-k statistic sums
products over t = l1..l2 where l1 = max(1, 1+k) and l2 = min(n, n+k), and
divides by l2 - l1 (one less than the number of summands). That divisor is
kept deliberately; the reference Monte Carlo tables were produced with it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .stable import signed_power

__all__ = ["FlocConfig", "empirical_autocov", "empirical_floc"]


@dataclass(frozen=True)
class FlocConfig:
    """Exponent pair (A, B) of the FLOC E[X^<A> Y^<B>].

    Finiteness of the population FLOC requires A + B < alpha of the series'
    law; that is the caller's responsibility, the estimator itself accepts
    any nonnegative pair.
    """

    a_exp: float = 1.0
    b_exp: float = 0.45

    def __post_init__(self):
        if self.a_exp < 0.0 or self.b_exp < 0.0:
            raise ParameterError("FLOC exponents must be nonnegative")


def _lagged_mean(a: np.ndarray, b: np.ndarray, lag: int) -> float:
    """Mean of a[t] * b[t-lag] over the paper's index window, divisor l2-l1."""
    n = a.size
    if abs(lag) >= n:
        raise ParameterError(f"|lag| must be < series length {n}, got {lag}")
    if lag >= 0:
        total = float(a[lag:] @ b[: n - lag])
        divisor = n - 1 - lag
    else:
        total = float(a[: n + lag] @ b[-lag:])
        divisor = n - 1 + lag
    return total / divisor


def empirical_autocov(series, lag: int) -> float:
    """Lag-k sample autocovariance of a zero-mean series (no mean removal)."""
    y = np.asarray(series, dtype=float).ravel()
    return _lagged_mean(y, y, lag)


def empirical_floc(series, lag: int, cfg: FlocConfig) -> float:
    """Lag-k sample FLOC: mean of X_t^<A> X_{t-k}^<B>.

    Reduces exactly to `empirical_autocov` when A = B = 1.
    """
    x = np.asarray(series, dtype=float).ravel()
    return _lagged_mean(signed_power(x, cfg.a_exp), signed_power(x, cfg.b_exp), lag)
