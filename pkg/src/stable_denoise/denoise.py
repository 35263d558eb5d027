"""Window construction, the Stable-N2N pipeline, its baselines, and
trajectory reconstruction.

Training maps a signed-power-transformed window of the noisy series onto the
next raw window (stride 1). At inference every window of the series is
pushed through the trained net and treated as a denoised version of the
*input* positions; the output series takes the first element of each
denoised window except the last, which contributes all of its q values.
This keeps the output exactly as long as the input.

Baselines: NAC trains noisier->noisy on aligned raw windows, NR2N does the
same on a disjoint training segment and inverts the extra corruption as
2*net(noisier) - noisier at inference, N2C trains noisy->pure (supervised
upper bound), and WDN is an identity pass-through so every method shares
one evaluation path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ParameterError
from .network import NetworkState, TrainConfig, forward, init_network, train
from .stable import StableParams, sample_stable, signed_power

__all__ = [
    "WindowSet",
    "BlindNoiseRange",
    "draw_blind_noise",
    "build_training_windows",
    "apply_windows",
    "stable_n2n",
    "nac",
    "nr2n",
    "n2c",
    "wdn",
]

WINDOW_LENGTH = 10


@dataclass(frozen=True)
class BlindNoiseRange:
    """Uniform sampling box for blind noise draws: alpha and sigma bounds."""

    alpha_low: float = 1.5
    alpha_high: float = 1.9
    sigma_low: float = 1.0
    sigma_high: float = 2.5

    def __post_init__(self):
        if not 1.0 < self.alpha_low <= self.alpha_high <= 2.0:
            raise ParameterError("need 1 < alpha_low <= alpha_high <= 2")
        if not 0.0 < self.sigma_low <= self.sigma_high:
            raise ParameterError("need 0 < sigma_low <= sigma_high")


def draw_blind_noise(noise_range: BlindNoiseRange, rng: np.random.Generator) -> StableParams:
    """One (alpha, sigma) pair drawn uniformly from the range."""
    alpha = rng.uniform(noise_range.alpha_low, noise_range.alpha_high)
    sigma = rng.uniform(noise_range.sigma_low, noise_range.sigma_high)
    return StableParams(alpha=alpha, sigma=sigma)


@dataclass
class WindowSet:
    """Paired training windows with their source positions.

    In training mode targets start q + offset_n samples after the inputs;
    in aligned mode (used by NAC/N2C) they cover the same indices, possibly
    taken from a second series.
    """

    q: int
    offset_n: int
    inputs: np.ndarray
    targets: np.ndarray
    input_starts: np.ndarray
    aligned: bool = False

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def pairs(self) -> list:
        return list(zip(self.inputs, self.targets))


def build_training_windows(
    noisy, q: int = WINDOW_LENGTH, offset_n: int = 0, b_prime: float = 0.45
) -> WindowSet:
    """Stride-1 pairs: transformed window -> the raw window q + offset_n later."""
    y = np.asarray(noisy, dtype=float).ravel()
    n = y.size
    if q < 1 or offset_n < 0:
        raise ParameterError("q must be positive and offset_n nonnegative")
    if n < 2 * q + offset_n:
        raise ParameterError(f"series length {n} < 2q + offset_n = {2 * q + offset_n}")
    count = n - 2 * q - offset_n + 1
    windows = sliding_window_view(y, q)
    inputs = signed_power(windows[:count], b_prime)
    targets = windows[q + offset_n : q + offset_n + count].copy()
    return WindowSet(
        q=q,
        offset_n=offset_n,
        inputs=np.ascontiguousarray(inputs),
        targets=targets,
        input_starts=np.arange(count),
    )


def _aligned_windows(inputs_series, targets_series, q: int) -> WindowSet:
    a = np.asarray(inputs_series, dtype=float).ravel()
    b = np.asarray(targets_series, dtype=float).ravel()
    if a.size != b.size:
        raise ParameterError("aligned window series must have equal length")
    if a.size < q:
        raise ParameterError(f"series length {a.size} < q = {q}")
    inputs = np.ascontiguousarray(sliding_window_view(a, q))
    targets = np.ascontiguousarray(sliding_window_view(b, q))
    return WindowSet(
        q=q,
        offset_n=0,
        inputs=inputs,
        targets=targets,
        input_starts=np.arange(inputs.shape[0]),
        aligned=True,
    )


def _reconstruct(outputs: np.ndarray, n: int, q: int) -> np.ndarray:
    """First element of every denoised window, whole final window for the tail."""
    denoised = np.empty(n)
    denoised[: n - q] = outputs[:-1, 0]
    denoised[n - q :] = outputs[-1]
    return denoised


def apply_windows(
    state: NetworkState,
    series,
    q: int = WINDOW_LENGTH,
    b_prime: float | None = None,
    shift_outputs: bool = False,
) -> np.ndarray:
    """Denoise a series with a trained network.

    Every length-q window (transformed by b_prime when given) is pushed
    through the net; reconstruction treats window outputs as denoised input
    positions. shift_outputs=True instead assigns them q steps ahead
    (matching the training displacement); the first q positions then keep
    their original values. Output length always equals the input length.
    """
    y = np.asarray(series, dtype=float).ravel()
    n = y.size
    if n < q:
        raise ParameterError(f"series length {n} < q = {q}")
    windows = sliding_window_view(y, q)
    net_in = signed_power(windows, b_prime) if b_prime is not None else windows
    outputs = forward(state, np.ascontiguousarray(net_in))
    if not shift_outputs:
        return _reconstruct(outputs, n, q)
    if n < 2 * q:
        raise ParameterError(f"shifted reconstruction needs length >= 2q, got {n}")
    denoised = y.copy()
    denoised[q : n - q] = outputs[: n - 2 * q, 0]
    denoised[n - q :] = outputs[n - 2 * q]
    return denoised


def _train_fresh(window_set: WindowSet, cfg: TrainConfig) -> NetworkState:
    """Fresh init and training streams derived from the config seed."""
    init_ss, shuffle_ss = np.random.SeedSequence(cfg.seed).spawn(2)
    state = init_network(init_ss)
    trained, _ = train(state, window_set.pairs, cfg, rng=np.random.default_rng(shuffle_ss))
    return trained


def _noise_draw(noise, count: int, rng: np.random.Generator) -> np.ndarray:
    """Sample a noise path; a plain number is a Gaussian variance (0 allowed)."""
    if isinstance(noise, StableParams):
        return sample_stable(noise, count, rng)
    variance = float(noise)
    if variance < 0.0:
        raise ParameterError(f"noise variance must be nonnegative, got {variance}")
    if variance == 0.0:
        return np.zeros(count)
    return sample_stable(StableParams.gaussian(variance), count, rng)


def stable_n2n(
    noisy,
    cfg: TrainConfig,
    q: int = WINDOW_LENGTH,
    b_prime: float = 0.45,
    offset_n: int = 0,
    shift_outputs: bool = False,
) -> np.ndarray:
    """Self-supervised denoising: train transformed-window -> next-window.

    For infinite-variance data b_prime should satisfy
    b_prime < min(alpha_xi, alpha_z) / 2; use b_prime=1 for Gaussian data.
    """
    y = np.asarray(noisy, dtype=float).ravel()
    window_set = build_training_windows(y, q, offset_n, b_prime)
    state = _train_fresh(window_set, cfg)
    return apply_windows(state, y, q, b_prime=b_prime, shift_outputs=shift_outputs)


def nac(
    noisy,
    simulated_noise,
    cfg: TrainConfig,
    q: int = WINDOW_LENGTH,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Noisy-As-Clean: train noisier -> noisy on aligned raw windows.

    `simulated_noise` is a StableParams law (blind draw) or a Gaussian
    variance estimate. Inference runs the raw noisy windows through the net.
    """
    y = np.asarray(noisy, dtype=float).ravel()
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    noisier = y + _noise_draw(simulated_noise, y.size, rng)
    state = _train_fresh(_aligned_windows(noisier, y, q), cfg)
    return apply_windows(state, y, q)


def nr2n(
    noisy,
    train_extra,
    simulated_noise,
    cfg: TrainConfig,
    q: int = WINDOW_LENGTH,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Noisier2Noise: train noisier -> noisy on a disjoint segment, invert at
    inference as 2 * net(noisier) - noisier on a freshly corrupted copy."""
    y = np.asarray(noisy, dtype=float).ravel()
    extra = np.asarray(train_extra, dtype=float).ravel()
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    noisier_train = extra + _noise_draw(simulated_noise, extra.size, rng)
    state = _train_fresh(_aligned_windows(noisier_train, extra, q), cfg)

    noisier_eval = y + _noise_draw(simulated_noise, y.size, rng)
    windows = np.ascontiguousarray(sliding_window_view(noisier_eval, q))
    outputs = 2.0 * forward(state, windows) - windows
    return _reconstruct(outputs, y.size, q)


def n2c(
    noisy,
    train_noisy,
    train_pure,
    cfg: TrainConfig,
    q: int = WINDOW_LENGTH,
) -> np.ndarray:
    """Noise2Clean supervised upper bound: train noisy -> pure, infer on noisy."""
    y = np.asarray(noisy, dtype=float).ravel()
    state = _train_fresh(_aligned_windows(train_noisy, train_pure, q), cfg)
    return apply_windows(state, y, q)


def wdn(noisy) -> np.ndarray:
    """Without-denoising pass-through (identity), for a shared evaluation path."""
    return np.array(noisy, dtype=float).ravel()
