"""Bias and forecast metrics for one denoised trajectory."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError

__all__ = ["param_mae", "forecast_5", "forecast_mae", "TrajectoryResult"]

FORECAST_HORIZON = 5


def param_mae(theta_true, theta_hat) -> float:
    """Mean absolute error between true and estimated coefficient vectors."""
    a = np.asarray(theta_true, dtype=float).ravel()
    b = np.asarray(theta_hat, dtype=float).ravel()
    if a.size != b.size:
        raise ShapeError(f"coefficient vectors differ in length: {a.size} vs {b.size}")
    return float(np.mean(np.abs(a - b)))


def forecast_5(denoised_tail, theta, horizon: int = FORECAST_HORIZON) -> np.ndarray:
    """Recursive multi-step forecast from the last p series values.

    `denoised_tail` holds the final p values oldest first; `theta` the AR
    coefficients (theta_1 multiplies the most recent value). Each forecast
    feeds back into the recursion.
    """
    tail = list(np.asarray(denoised_tail, dtype=float).ravel())
    coef = np.asarray(theta, dtype=float).ravel()
    if len(tail) != coef.size:
        raise ShapeError(f"tail length {len(tail)} must equal order {coef.size}")
    p = coef.size
    for _ in range(horizon):
        tail.append(float(sum(coef[j] * tail[-1 - j] for j in range(p))))
    return np.asarray(tail[-horizon:])


def forecast_mae(forecast, truth) -> float:
    """Mean absolute error between forecast values and the true continuation."""
    f = np.asarray(forecast, dtype=float).ravel()
    t = np.asarray(truth, dtype=float).ravel()
    if f.size != t.size:
        raise ShapeError(f"forecast and truth differ in length: {f.size} vs {t.size}")
    return float(np.mean(np.abs(f - t)))


@dataclass
class TrajectoryResult:
    """Per-trajectory record: estimate, bias metric, forecast and flags."""

    method: str
    theta_hat: np.ndarray = field(repr=False)
    param_mae: float
    forecast: np.ndarray | None = field(default=None, repr=False)
    forecast_mae: float | None = None
    flags: tuple = ()
