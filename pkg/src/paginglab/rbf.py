"""Radial-basis-function network for one-step-ahead load prediction.

Two layers: a Gaussian hidden layer whose net input is the Euclidean
distance between the input window and a center, scaled by a bias ``b``
(activation ``exp(-(distance*b)**2)``), and a linear output layer (weighted
sum plus offset).  With the default bias of 0.8326 a center responds with
0.5 to any input at unit distance, which fixes the kernel width on
normalized data.

Training is greedy: starting from the offset-only fit, the training window
with the largest absolute residual is promoted to a center, all output
weights are refit by least squares, and the loop repeats until the MSE goal
is met or the neuron budget runs out.  The MSE goal applies to targets
normalized by the training maximum; the scale factor is stored with the
model so predictions come back in Erlang.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .traffic import TrafficSeries

__all__ = [
    "RbfModel",
    "TrainReport",
    "InsufficientDataError",
    "DEFAULT_BIAS",
    "DEFAULT_WINDOW",
    "DEFAULT_MSE_GOAL",
    "DEFAULT_MAX_NEURONS",
    "activation",
    "train",
    "save_model",
    "load_model",
]

DEFAULT_BIAS = 0.8326
DEFAULT_WINDOW = 8
DEFAULT_MSE_GOAL = 0.02
DEFAULT_MAX_NEURONS = 60

_MODEL_FORMAT = "rbf-model"
_MODEL_VERSION = 1


class InsufficientDataError(ValueError):
    """Series too short to form the required training pairs."""


def activation(distance, bias: float):
    """Gaussian hidden-unit response, exp(-(distance * bias)**2).

    Strictly decreasing in distance, 1 at distance zero and 0.5 at unit
    distance for the default bias.  Accepts scalars or arrays.
    """
    n = np.asarray(distance, dtype=float) * bias
    out = np.exp(-(n * n))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RbfModel:
    """Frozen predictor: centers, hidden bias, linear weights, and scale."""

    centers: np.ndarray  # (neurons, window), normalized-load units
    bias: float
    weights: np.ndarray  # (neurons,)
    offset: float
    window: int
    scale: float

    def __post_init__(self) -> None:
        centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if centers.size == 0:
            centers = centers.reshape(0, self.window)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "weights", weights)
        if centers.shape[1] != self.window:
            raise ValueError(
                f"centers have dimension {centers.shape[1]}, window is {self.window}"
            )
        if weights.shape[0] != centers.shape[0]:
            raise ValueError(
                f"{weights.shape[0]} weights for {centers.shape[0]} centers"
            )
        if not self.bias > 0:
            raise ValueError(f"bias must be > 0, got {self.bias}")
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")

    @property
    def neurons(self) -> int:
        return int(self.centers.shape[0])

    def predict(self, window: np.ndarray) -> float:
        """One-step-ahead load (Erlang) from the most recent W samples."""
        x = np.asarray(window, dtype=float)
        if x.shape != (self.window,):
            raise ValueError(f"window must have shape ({self.window},), got {x.shape}")
        return float(self.predict_batch(x[np.newaxis, :])[0])

    def predict_batch(self, windows: np.ndarray) -> np.ndarray:
        """Vectorized predict over rows of a (n, window) matrix."""
        x = np.asarray(windows, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.window:
            raise ValueError(f"windows must have shape (n, {self.window}), got {x.shape}")
        h = self._hidden(x / self.scale)
        return self.scale * (self.offset + h @ self.weights)

    def _hidden(self, x_norm: np.ndarray) -> np.ndarray:
        if self.neurons == 0:
            return np.zeros((x_norm.shape[0], 0))
        # pairwise Euclidean distances input-to-center
        diff = x_norm[:, np.newaxis, :] - self.centers[np.newaxis, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=2))
        return activation(dist, self.bias)


@dataclass(frozen=True)
class TrainReport:
    """Bookkeeping of one training run."""

    neurons: int
    final_mse: float
    mse_history: tuple[float, ...]
    goal_met: bool


def _training_pairs(samples: np.ndarray, window: int) -> tuple[np.ndarray, np.ndarray]:
    n = samples.size - window
    x = np.lib.stride_tricks.sliding_window_view(samples, window)[:n]
    y = samples[window:]
    return np.ascontiguousarray(x, dtype=float), np.asarray(y, dtype=float)


def _fit_weights(
    h: np.ndarray, y: np.ndarray, ridge: float
) -> tuple[float, np.ndarray]:
    """Least-squares offset + weights; ridge on the weights only."""
    n, k = h.shape
    phi = np.hstack([np.ones((n, 1)), h])
    if ridge > 0.0:
        gram = phi.T @ phi
        gram[1:, 1:] += ridge * np.eye(k)
        theta = np.linalg.solve(gram, phi.T @ y)
    else:
        theta, *_ = np.linalg.lstsq(phi, y, rcond=None)
    return float(theta[0]), theta[1:]


def train(
    series: TrafficSeries,
    window: int = DEFAULT_WINDOW,
    bias: float = DEFAULT_BIAS,
    mse_goal: float = DEFAULT_MSE_GOAL,
    max_neurons: int = DEFAULT_MAX_NEURONS,
    ridge: float = 1e-8,
) -> tuple[RbfModel, TrainReport]:
    """Fit a predictor on sliding windows of a load series.

    Pairs are (W consecutive normalized samples -> next normalized sample).
    Center insertion is greedy on the largest absolute residual, ties going
    to the earliest window; after every insertion the output layer is refit
    in full.  At least one center is always placed, so even a constant
    series reports one neuron (carried entirely by the offset).  The ridge
    term keeps the refit solvable when centers nearly coincide.
    """
    if mse_goal <= 0:
        raise ValueError(f"mse_goal must be > 0, got {mse_goal}")
    if max_neurons < 1:
        raise ValueError(f"max_neurons must be >= 1, got {max_neurons}")
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    samples = series.samples
    if samples.size < window + 2:
        raise InsufficientDataError(
            f"need at least {window + 2} samples to train, got {samples.size}"
        )

    scale = float(samples.max())
    if scale <= 0.0:  # all-zero series: normalization is a no-op
        scale = 1.0
    x = samples / scale
    inputs, targets = _training_pairs(x, window)
    n_pairs = inputs.shape[0]

    offset = float(targets.mean())
    residuals = targets - offset
    center_idx: list[int] = []
    used = np.zeros(n_pairs, dtype=bool)
    h = np.zeros((n_pairs, 0))
    weights = np.zeros(0)
    mse_history: list[float] = []
    mse = float(np.mean(residuals**2))

    while len(center_idx) < max_neurons:
        order = np.argsort(-np.abs(residuals), kind="stable")
        candidates = order[~used[order]]
        if candidates.size == 0:
            break
        pick = int(candidates[0])
        used[pick] = True
        center_idx.append(pick)

        dist = np.sqrt(np.sum((inputs - inputs[pick]) ** 2, axis=1))
        h = np.column_stack([h, activation(dist, bias)])
        offset, weights = _fit_weights(h, targets, ridge)
        residuals = targets - (offset + h @ weights)
        mse = float(np.mean(residuals**2))
        mse_history.append(mse)
        if mse <= mse_goal:
            break

    model = RbfModel(
        centers=inputs[center_idx],
        bias=bias,
        weights=weights,
        offset=offset,
        window=window,
        scale=scale,
    )
    report = TrainReport(
        neurons=len(center_idx),
        final_mse=mse,
        mse_history=tuple(mse_history),
        goal_met=mse <= mse_goal,
    )
    return model, report


def save_model(model: RbfModel, path: str | Path) -> None:
    """Write the versioned plain-text model file (17 significant digits)."""
    from ._io import fmt_float

    lines = [
        f"{_MODEL_FORMAT} {_MODEL_VERSION}",
        f"window {model.window}",
        f"bias {fmt_float(model.bias)}",
        f"scale {fmt_float(model.scale)}",
        f"neurons {model.neurons}",
    ]
    for center, weight in zip(model.centers, model.weights):
        lines.append(" ".join(fmt_float(v) for v in center) + f" {fmt_float(weight)}")
    lines.append(f"offset {fmt_float(model.offset)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_model(path: str | Path) -> RbfModel:
    """Read a model file back; round-trips bit-exactly with save_model."""
    lines = Path(path).read_text().splitlines()
    fmt, version = lines[0].split()
    if fmt != _MODEL_FORMAT:
        raise ValueError(f"{path}: not a model file (header {lines[0]!r})")
    if int(version) != _MODEL_VERSION:
        raise ValueError(f"{path}: unsupported model version {version}")

    def field(idx: int, name: str) -> str:
        key, value = lines[idx].split()
        if key != name:
            raise ValueError(f"{path}: expected {name!r} on line {idx + 1}, got {key!r}")
        return value

    window = int(field(1, "window"))
    bias = float(field(2, "bias"))
    scale = float(field(3, "scale"))
    neurons = int(field(4, "neurons"))
    centers = np.zeros((neurons, window))
    weights = np.zeros(neurons)
    for j in range(neurons):
        values = [float(tok) for tok in lines[5 + j].split()]
        if len(values) != window + 1:
            raise ValueError(f"{path}: center line {5 + j + 1} has {len(values)} values")
        centers[j] = values[:window]
        weights[j] = values[window]
    offset = float(field(5 + neurons, "offset"))
    return RbfModel(
        centers=centers, bias=bias, weights=weights, offset=offset,
        window=window, scale=scale,
    )
