"""Yule-Walker estimation of AR(p) coefficients, with and without additive
observation noise.

Four methods share one linear-system core:

* classical_yw  - low-order autocovariance system, finite variance.
* floc_yw       - the same system built from FLOC(., 1, B) entries, for
                  infinite-variance series (order p >= 2 only).
* eiv_gaussian  - errors-in-variables: estimate the additive-noise variance
                  from r high-order equations, then de-bias the low-order
                  solve by shifting the Gram matrix diagonal.
* eiv_stable    - the FLOC analogue: the diagonal shift Lambda is a free
                  nonnegative scalar found by the same 1-D minimization.

The 1-D search uses a dense 1001-point grid over the admissible interval
followed by golden-section refinement around the best grid point, because
the high-order cost need not be convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dependence import FlocConfig, empirical_autocov, empirical_floc
from .errors import (
    DegenerateDataError,
    NumericalError,
    ParameterError,
    UnsupportedOrderError,
)

__all__ = [
    "EstimationResult",
    "YwSystem",
    "build_yw_system",
    "classical_yw",
    "floc_yw",
    "eiv_gaussian",
    "eiv_stable",
]

CONDITION_LIMIT = 1e12

GRID_POINTS = 1001
GOLDEN_REL_WIDTH = 1e-6


@dataclass
class EstimationResult:
    """Estimated coefficient vector with an optional noise-level estimate."""

    theta_hat: np.ndarray
    method: str
    noise_level: float | None = None


@dataclass
class YwSystem:
    """Low- and high-order Yule-Walker matrices built from one series.

    gamma (p x p) with lam (p,) form the low-order system; gamma_high
    (r x p) with lam_high (r,) the high-order one. For FLOC systems gamma
    is generally asymmetric because signed powers break the symmetry.
    """

    gamma: np.ndarray
    lam: np.ndarray
    gamma_high: np.ndarray
    lam_high: np.ndarray

    @property
    def order(self) -> int:
        return self.lam.size


class _LagCov:
    """Cached lag-k covariance entries, classical or FLOC flavoured."""

    def __init__(self, series, floc_b: float | None):
        self.y = np.asarray(series, dtype=float).ravel()
        self.cfg = None if floc_b is None else FlocConfig(a_exp=1.0, b_exp=floc_b)
        self._cache: dict[int, float] = {}

    @property
    def n(self) -> int:
        return self.y.size

    def __call__(self, k: int) -> float:
        if k not in self._cache:
            if self.cfg is None:
                self._cache[k] = empirical_autocov(self.y, k)
            else:
                self._cache[k] = empirical_floc(self.y, k, self.cfg)
        return self._cache[k]

    def low_order(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        # classical entries use gamma(j - i), FLOC entries gamma~(i - j, 1, B);
        # identical for the symmetric classical function, kept verbatim anyway
        if self.cfg is None:
            lag = lambda i, j: j - i
        else:
            lag = lambda i, j: i - j
        gamma = np.array([[self(lag(i, j)) for j in range(1, p + 1)] for i in range(1, p + 1)])
        lam = np.array([self(k) for k in range(1, p + 1)])
        return gamma, lam

    def high_order(self, p: int, r: int) -> tuple[np.ndarray, np.ndarray]:
        gamma_high = np.array(
            [[self(p + i - j) for j in range(1, p + 1)] for i in range(1, r + 1)]
        )
        lam_high = np.array([self(p + k) for k in range(1, r + 1)])
        return gamma_high, lam_high


def build_yw_system(series, p: int, r: int, floc_b: float | None = None) -> YwSystem:
    """Assemble the empirical YW matrices for order p with r high-order rows.

    With floc_b=None the entries are sample autocovariances; otherwise they
    are FLOC estimates with A = 1 and B = floc_b. Requires r >= p and a
    series longer than p + r.
    """
    if p < 1:
        raise ParameterError(f"order p must be >= 1, got {p}")
    if r < p:
        raise ParameterError(f"high-order count r must be >= p, got r={r}, p={p}")
    cov = _LagCov(series, floc_b)
    if cov.n <= p + r:
        raise ParameterError(f"series length {cov.n} too short for p={p}, r={r}")
    gamma, lam = cov.low_order(p)
    gamma_high, lam_high = cov.high_order(p, r)
    return YwSystem(gamma=gamma, lam=lam, gamma_high=gamma_high, lam_high=lam_high)


def _guarded_solve(matrix: np.ndarray, rhs: np.ndarray, context: str) -> np.ndarray:
    """Solve a small dense square system, refusing ill-conditioned ones."""
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NumericalError(
            f"{context}: system condition {cond:.3e} exceeds {CONDITION_LIMIT:.0e}"
        )
    try:
        theta = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"{context}: singular system ({exc})") from exc
    if not np.all(np.isfinite(theta)):
        raise NumericalError(f"{context}: non-finite solution")
    return theta


def _golden_section(f, a: float, b: float, tol: float) -> float:
    """Golden-section search for the minimizer of f on [a, b]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    inv_phi2 = (3.0 - math.sqrt(5.0)) / 2.0
    h = b - a
    if h <= tol:
        return (a + b) / 2.0
    steps = int(math.ceil(math.log(tol / h) / math.log(inv_phi)))
    c = a + inv_phi2 * h
    d = a + inv_phi * h
    yc, yd = f(c), f(d)
    for _ in range(steps):
        if yc < yd:
            b, d, yd = d, c, yc
            h *= inv_phi
            c = a + inv_phi2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= inv_phi
            d = a + inv_phi * h
            yd = f(d)
    return (a + b) / 2.0


def high_order_cost(system: YwSystem, shift: float) -> float:
    """Squared norm of the high-order residual at a given diagonal shift."""
    p = system.order
    try:
        theta = np.linalg.solve(system.gamma - shift * np.eye(p), system.lam)
    except np.linalg.LinAlgError:
        return float("inf")
    resid = system.gamma_high @ theta - system.lam_high
    value = float(resid @ resid)
    return value if np.isfinite(value) else float("inf")


def _minimize_noise_level(system: YwSystem, lo: float, hi: float) -> float:
    """Locate the noise-level shift: first dip of the high-order cost.

    The cost is rational in the shift with its consistent root at the
    smallest dip; pseudo-minima (where the de-biased solution blows up
    along the near-singular direction yet happens to fit the r high-order
    equations) all lie further right, toward the interval boundary. The
    grid is therefore scanned upward for the first local minimum, which is
    then refined by golden section.
    """
    if hi <= lo:
        return lo
    cost = lambda v: high_order_cost(system, v)
    grid = np.linspace(lo, hi, GRID_POINTS)
    values = np.array([cost(v) for v in grid])
    best = None
    if values[0] < values[1]:
        best = 0
    else:
        for i in range(1, GRID_POINTS - 1):
            if values[i] <= values[i - 1] and values[i] <= values[i + 1]:
                best = i
                break
    if best is None:
        best = int(np.argmin(values))
    bracket_lo = grid[max(best - 1, 0)]
    bracket_hi = grid[min(best + 1, GRID_POINTS - 1)]
    refined = _golden_section(cost, bracket_lo, bracket_hi, GOLDEN_REL_WIDTH * (hi - lo))
    if cost(refined) <= values[best]:
        return float(refined)
    return float(grid[best])


def classical_yw(series, p: int) -> EstimationResult:
    """Solve the low-order autocovariance Yule-Walker system."""
    if p < 1:
        raise ParameterError(f"order p must be >= 1, got {p}")
    cov = _LagCov(series, None)
    if cov.n <= p:
        raise ParameterError(f"series length {cov.n} too short for order {p}")
    gamma, lam = cov.low_order(p)
    theta = _guarded_solve(gamma, lam, "classical_yw")
    return EstimationResult(theta_hat=theta, method="classical_yw")


def floc_yw(series, p: int, b_exp: float = 0.45) -> EstimationResult:
    """Solve the low-order FLOC Yule-Walker system (A = 1 fixed).

    Orders below 2 are rejected: the p = 1 estimate has a different closed
    form that this package does not implement.
    """
    if p < 2:
        raise UnsupportedOrderError("floc_yw supports order p >= 2 only")
    cov = _LagCov(series, b_exp)
    if cov.n <= p:
        raise ParameterError(f"series length {cov.n} too short for order {p}")
    gamma, lam = cov.low_order(p)
    theta = _guarded_solve(gamma, lam, "floc_yw")
    return EstimationResult(theta_hat=theta, method="floc_yw")


def eiv_gaussian(series, p: int, r: int = 2) -> EstimationResult:
    """Errors-in-variables estimate for Gaussian AR plus Gaussian noise.

    The additive-noise variance estimate is the minimizer of the high-order
    residual cost over [0, min eig(G)], where G is the (p+1) x (p+1)
    autocovariance block matrix of the observations; the estimate is then
    subtracted from the Gram diagonal before the low-order solve.
    """
    system = build_yw_system(series, p, r)
    g_block = np.empty((p + 1, p + 1))
    g_block[0, 0] = empirical_autocov(np.asarray(series, dtype=float).ravel(), 0)
    g_block[0, 1:] = system.lam
    g_block[1:, 0] = system.lam
    g_block[1:, 1:] = system.gamma
    min_eig = float(np.linalg.eigvalsh(g_block)[0])
    if min_eig <= 0.0:
        raise DegenerateDataError(
            f"eiv_gaussian: min eigenvalue of the observation block matrix is {min_eig:.3e}"
        )
    nu_hat = _minimize_noise_level(system, 0.0, min_eig)
    theta = _guarded_solve(system.gamma - nu_hat * np.eye(p), system.lam, "eiv_gaussian")
    return EstimationResult(theta_hat=theta, method="eiv_gaussian", noise_level=nu_hat)


def eiv_stable(series, p: int, r: int = 2, b_bar: float = 0.45) -> EstimationResult:
    """FLOC errors-in-variables estimate for stable AR plus stable noise.

    The diagonal shift Lambda >= 0 plays the role of the noise level. Its
    search interval is [0, min eig of the symmetrized FLOC Gram matrix],
    falling back to [0, gamma~(0, B)] when that eigenvalue is nonpositive.
    """
    if p < 2:
        raise UnsupportedOrderError("eiv_stable supports order p >= 2 only")
    system = build_yw_system(series, p, r, floc_b=b_bar)
    sym = (system.gamma + system.gamma.T) / 2.0
    hi = float(np.linalg.eigvalsh(sym)[0])
    if hi <= 0.0:
        hi = empirical_floc(
            np.asarray(series, dtype=float).ravel(), 0, FlocConfig(a_exp=1.0, b_exp=b_bar)
        )
        if hi <= 0.0:
            raise DegenerateDataError("eiv_stable: no valid search interval for the noise level")
    lambda_hat = _minimize_noise_level(system, 0.0, hi)
    theta = _guarded_solve(system.gamma - lambda_hat * np.eye(p), system.lam, "eiv_stable")
    return EstimationResult(theta_hat=theta, method="eiv_stable", noise_level=lambda_hat)
