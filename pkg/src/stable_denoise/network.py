"""A small fully-connected feedforward network trained from scratch.

Architecture is 10-22-22-10: two ReLU hidden layers of 22 nodes between a
10-node input and a 10-node linear output. Training minimizes mean squared
error with AdamW (decoupled weight decay applied to weights only, never to
biases) using moment constants 0.9 / 0.999, epsilon 1e-8 and bias
correction. Everything lives in plain numpy arrays so a NetworkState can be
copied, inspected and checked against finite differences directly.
"""

from __future__ import annotations

import copy
import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ShapeError, TrainingDivergence

__all__ = ["LAYER_DIMS", "TrainConfig", "NetworkState", "init_network", "forward", "train",
           "dump_weights"]

LAYER_DIMS = (10, 22, 22, 10)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass
class TrainConfig:
    """Training hyperparameters; the defaults are the reference settings."""

    epochs: int = 30
    batch_size: int = 10
    learning_rate: float = 0.001
    weight_decay: float = 0.0001
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ParameterError("epochs and batch_size must be positive")
        if self.learning_rate <= 0.0 or self.weight_decay < 0.0:
            raise ParameterError("learning_rate must be positive, weight_decay nonnegative")


@dataclass
class NetworkState:
    """Weights, biases and AdamW moments of the feedforward net."""

    weights: list = field(repr=False)
    biases: list = field(repr=False)
    m_weights: list = field(repr=False)
    v_weights: list = field(repr=False)
    m_biases: list = field(repr=False)
    v_biases: list = field(repr=False)
    step_count: int = 0

    @property
    def layer_dims(self) -> tuple:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    def copy(self) -> "NetworkState":
        return copy.deepcopy(self)


def init_network(seed, layer_dims: tuple = LAYER_DIMS) -> NetworkState:
    """Fresh state: fan-based uniform weights, zero biases, zero moments."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return NetworkState(
        weights=weights,
        biases=biases,
        m_weights=[np.zeros_like(w) for w in weights],
        v_weights=[np.zeros_like(w) for w in weights],
        m_biases=[np.zeros_like(b) for b in biases],
        v_biases=[np.zeros_like(b) for b in biases],
    )


def forward(state: NetworkState, x) -> np.ndarray:
    """Apply the network: affine/ReLU pairs, linear output layer.

    Accepts a single input vector or a batch (rows are samples).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != state.weights[0].shape[0]:
        raise ShapeError(
            f"input must have {state.weights[0].shape[0]} features, got shape {x.shape}"
        )
    h = x
    last = len(state.weights) - 1
    for i, (w, b) in enumerate(zip(state.weights, state.biases)):
        h = h @ w + b
        if i < last:
            h = np.maximum(h, 0.0)
    return h[0] if single else h


def _forward_cached(state: NetworkState, x: np.ndarray):
    """Forward pass keeping pre-activations for backpropagation."""
    pre, post = [], [x]
    h = x
    last = len(state.weights) - 1
    for i, (w, b) in enumerate(zip(state.weights, state.biases)):
        a = h @ w + b
        pre.append(a)
        h = np.maximum(a, 0.0) if i < last else a
        post.append(h)
    return pre, post


def _gradients(state: NetworkState, x: np.ndarray, target: np.ndarray):
    """Analytic gradients of the batch MSE (mean over samples and outputs)."""
    pre, post = _forward_cached(state, x)
    out = post[-1]
    scale = out.size  # batch * output width
    delta = 2.0 * (out - target) / scale
    grad_w, grad_b = [None] * len(state.weights), [None] * len(state.biases)
    for i in range(len(state.weights) - 1, -1, -1):
        grad_w[i] = post[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ state.weights[i].T) * (pre[i - 1] > 0.0)
    loss = float(np.mean((out - target) ** 2))
    return loss, grad_w, grad_b


def _adamw_step(state: NetworkState, grad_w, grad_b, cfg: TrainConfig) -> None:
    state.step_count += 1
    t = state.step_count
    bc1 = 1.0 - ADAM_BETA1**t
    bc2 = 1.0 - ADAM_BETA2**t
    lr = cfg.learning_rate
    for i in range(len(state.weights)):
        # decoupled decay first, weights only
        state.weights[i] *= 1.0 - lr * cfg.weight_decay
        for param, grad, m, v in (
            (state.weights[i], grad_w[i], state.m_weights[i], state.v_weights[i]),
            (state.biases[i], grad_b[i], state.m_biases[i], state.v_biases[i]),
        ):
            m *= ADAM_BETA1
            m += (1.0 - ADAM_BETA1) * grad
            v *= ADAM_BETA2
            v += (1.0 - ADAM_BETA2) * grad**2
            param -= lr * (m / bc1) / (np.sqrt(v / bc2) + ADAM_EPS)


def train(
    state: NetworkState,
    dataset,
    cfg: TrainConfig,
    rng: np.random.Generator | None = None,
) -> tuple[NetworkState, list]:
    """Train a copy of `state` on (input, target) pairs; returns (state, loss trace).

    The dataset is reshuffled every epoch; a final partial batch is used
    rather than dropped. The loss trace holds one mean batch loss per epoch.
    """
    pairs = list(dataset)
    if not pairs:
        raise ParameterError("dataset must be nonempty")
    inputs = np.asarray([p[0] for p in pairs], dtype=float)
    targets = np.asarray([p[1] for p in pairs], dtype=float)
    width_in = state.weights[0].shape[0]
    width_out = state.weights[-1].shape[1]
    if inputs.shape[1] != width_in or targets.shape[1] != width_out:
        raise ShapeError(
            f"pairs must be ({width_in}, {width_out})-dimensional, "
            f"got {inputs.shape[1]} and {targets.shape[1]}"
        )
    if rng is None:
        rng = np.random.default_rng(cfg.seed)

    state = state.copy()
    trace = []
    count = inputs.shape[0]
    for epoch in range(cfg.epochs):
        order = rng.permutation(count)
        batch_losses = []
        for start in range(0, count, cfg.batch_size):
            sel = order[start : start + cfg.batch_size]
            loss, grad_w, grad_b = _gradients(state, inputs[sel], targets[sel])
            if not np.isfinite(loss):
                raise TrainingDivergence(epoch)
            _adamw_step(state, grad_w, grad_b, cfg)
            batch_losses.append(loss)
        trace.append(float(np.mean(batch_losses)))
    return state, trace


def dump_weights(state: NetworkState, path) -> None:
    """Write all parameters to a flat CSV (layer, row, col, value); bias rows use row=-1."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["layer", "row", "col", "value"])
        for layer, (w, b) in enumerate(zip(state.weights, state.biases)):
            for r in range(w.shape[0]):
                for c in range(w.shape[1]):
                    writer.writerow([layer, r, c, repr(float(w[r, c]))])
            for c in range(b.size):
                writer.writerow([layer, -1, c, repr(float(b[c]))])
