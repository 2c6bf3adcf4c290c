"""One-hidden-layer perceptron trained by momentum SGD with early stopping."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..utils.math_helpers import sigmoid
from ..utils.seeding import make_rng
from .base import Model

logger = logging.getLogger(__name__)

HIDDEN_UNITS = 100
BATCH_SIZE = 200
VALIDATION_FRACTION = 0.1
TOL = 1e-4

Params = dict[str, np.ndarray]


def init_params(d: int, h: int, rng: np.random.Generator) -> Params:
    """Glorot-uniform weights, zero biases."""
    b1 = np.sqrt(6.0 / (d + h))
    b2 = np.sqrt(6.0 / (h + 1))
    return {
        "W1": rng.uniform(-b1, b1, size=(d, h)),
        "b1": np.zeros(h),
        "W2": rng.uniform(-b2, b2, size=h),
        "b2": np.zeros(1),
    }


def forward(params: Params, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hidden activations and output logits."""
    A = np.maximum(X @ params["W1"] + params["b1"], 0.0)
    return A, A @ params["W2"] + params["b2"][0]


def loss_and_grad(
    params: Params, X: np.ndarray, y: np.ndarray, alpha: float
) -> tuple[float, Params]:
    """Mean cross-entropy plus alpha·(||W1||² + ||W2||²)/(2n), and its gradient."""
    n = X.shape[0]
    A, z = forward(params, X)
    penalty = alpha / (2 * n) * (np.sum(params["W1"] ** 2) + np.sum(params["W2"] ** 2))
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z) + penalty)

    dz = (sigmoid(z) - y) / n
    dA = np.outer(dz, params["W2"]) * (A > 0)
    grads = {
        "W1": X.T @ dA + alpha / n * params["W1"],
        "b1": dA.sum(axis=0),
        "W2": A.T @ dz + alpha / n * params["W2"],
        "b2": np.array([dz.sum()]),
    }
    return loss, grads


@dataclass(frozen=True, eq=False)
class MLPModel(Model):
    params: Params = None
    epochs: int = 0

    def _score(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(forward(self.params, X)[1])


def _validation_split(
    n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    if n < 10:
        idx = np.arange(n)
        return idx, idx
    perm = rng.permutation(n)
    n_val = max(1, int(round(VALIDATION_FRACTION * n)))
    return np.sort(perm[n_val:]), np.sort(perm[:n_val])


def train_mlp(
    X: np.ndarray,
    y: np.ndarray,
    seed: int,
    alpha: float = 1e-4,
    learning_rate_init: float = 0.001,
    power_t: float = 0.5,
    max_iter: int = 200,
    momentum: float = 0.9,
    n_iter_no_change: int = 10,
    hidden_units: int = HIDDEN_UNITS,
    **_,
) -> MLPModel:
    """Per-epoch learning rate is learning_rate_init / (epoch + 1) ** power_t.

    Training stops once validation loss has not improved by TOL for
    ``n_iter_no_change`` epochs; the best weights seen are returned.
    """
    rng = make_rng(seed, "mlp")
    yf = y.astype(float)
    train_idx, val_idx = _validation_split(X.shape[0], rng)
    Xt, yt = X[train_idx], yf[train_idx]
    Xv, yv = X[val_idx], yf[val_idx]

    params = init_params(X.shape[1], hidden_units, rng)
    velocity = {k: np.zeros_like(v) for k, v in params.items()}
    best = {k: v.copy() for k, v in params.items()}
    best_loss = np.inf
    stale = 0
    batch = min(BATCH_SIZE, Xt.shape[0])
    epoch = 0

    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(int(max_iter)):
            lr = learning_rate_init / (epoch + 1) ** power_t
            order = rng.permutation(Xt.shape[0])
            for start in range(0, Xt.shape[0], batch):
                rows = order[start:start + batch]
                _, grads = loss_and_grad(params, Xt[rows], yt[rows], alpha)
                for k in params:
                    velocity[k] = momentum * velocity[k] - lr * grads[k]
                    params[k] = params[k] + velocity[k]
            val_loss, _ = loss_and_grad(params, Xv, yv, alpha)
            if not np.isfinite(val_loss):
                logger.debug("mlp diverged at epoch %d; keeping best weights", epoch)
                break
            if val_loss < best_loss:
                if val_loss < best_loss - TOL:
                    stale = 0
                else:
                    stale += 1
                best_loss = val_loss
                best = {k: v.copy() for k, v in params.items()}
            else:
                stale += 1
            if stale >= n_iter_no_change:
                break

    for v in best.values():
        v.setflags(write=False)
    return MLPModel(kind="MLP", n_features=X.shape[1], seed=seed, params=best, epochs=epoch + 1)
