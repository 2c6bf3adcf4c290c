"""L2-regularised logistic regression by batch gradient descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..utils.math_helpers import sigmoid
from .base import Model


@dataclass(frozen=True, eq=False)
class LogisticModel(Model):
    coef: np.ndarray = None
    intercept: float = 0.0

    def _score(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(X @ self.coef + self.intercept)


def train_logistic(
    X: np.ndarray, y: np.ndarray, seed: int, C: float = 1.0, max_iter: int = 100, **_
) -> LogisticModel:
    """Minimise mean log-loss + ||w||²/(2·C·n) with fixed step 0.1/n per epoch.

    The intercept is not penalised. Weights start at zero, so the fit is
    fully deterministic.
    """
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    step = 0.1 / n
    yf = y.astype(float)
    for _ in range(int(max_iter)):
        err = sigmoid(X @ w + b) - yf
        grad_w = X.T @ err + w / C
        grad_b = err.sum()
        w = w - step * grad_w
        b = b - step * grad_b
    w.setflags(write=False)
    return LogisticModel(kind="LR", n_features=d, seed=seed, coef=w, intercept=float(b))
