"""k-nearest-neighbour vote classifier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .base import Model


@dataclass(frozen=True, eq=False)
class KNNModel(Model):
    index: cKDTree = None
    labels: np.ndarray = None
    n_neighbors: int = 5

    def _score(self, X: np.ndarray) -> np.ndarray:
        k = min(self.n_neighbors, self.labels.shape[0])
        _, nn = self.index.query(X, k=k)
        nn = np.asarray(nn).reshape(X.shape[0], k)
        return self.labels[nn].mean(axis=1)


def train_knn(
    X: np.ndarray, y: np.ndarray, seed: int, n_neighbors: int = 5, leaf_size: int = 30, **_
) -> KNNModel:
    # leaf_size only shapes the search index
    labels = y.astype(float)
    labels.setflags(write=False)
    return KNNModel(
        kind="KNN",
        n_features=X.shape[1],
        seed=seed,
        index=cKDTree(np.array(X, dtype=float), leafsize=int(leaf_size)),
        labels=labels,
        n_neighbors=int(n_neighbors),
    )
