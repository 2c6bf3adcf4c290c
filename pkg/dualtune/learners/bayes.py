"""Gaussian naive Bayes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..utils.math_helpers import sigmoid
from .base import Model

MIN_EPSILON = 1e-12


@dataclass(frozen=True, eq=False)
class BayesModel(Model):
    theta: np.ndarray = None  # (2, d) class means
    var: np.ndarray = None  # (2, d) smoothed class variances
    log_prior: np.ndarray = None  # (2,)

    def joint_log_likelihood(self, X: np.ndarray) -> np.ndarray:
        out = np.empty((X.shape[0], 2))
        for c in (0, 1):
            out[:, c] = self.log_prior[c] - 0.5 * (
                np.sum(np.log(2.0 * np.pi * self.var[c]))
                + np.sum((X - self.theta[c]) ** 2 / self.var[c], axis=1)
            )
        return out

    def _score(self, X: np.ndarray) -> np.ndarray:
        """P(SBR | x); symmetric cases give exactly 0.5."""
        jll = self.joint_log_likelihood(X)
        return sigmoid(jll[:, 1] - jll[:, 0])


def train_bayes(
    X: np.ndarray, y: np.ndarray, seed: int, var_smoothing: float = 1e-9, **_
) -> BayesModel:
    """Per-class means and variances, each raised by var_smoothing · max feature variance."""
    epsilon = var_smoothing * float(np.var(X, axis=0).max()) if X.size else 0.0
    if epsilon <= 0:
        epsilon = MIN_EPSILON
    theta = np.empty((2, X.shape[1]))
    var = np.empty((2, X.shape[1]))
    prior = np.empty(2)
    for c in (0, 1):
        Xc = X[y == c]
        theta[c] = Xc.mean(axis=0)
        var[c] = Xc.var(axis=0) + epsilon
        prior[c] = Xc.shape[0] / X.shape[0]
    log_prior = np.log(prior)
    for a in (theta, var, log_prior):
        a.setflags(write=False)
    return BayesModel(
        kind="NB", n_features=X.shape[1], seed=seed, theta=theta, var=var, log_prior=log_prior
    )
