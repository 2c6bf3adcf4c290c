"""Base class for trained classifiers."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError
from ..utils.math_helpers import as_matrix

THRESHOLD = 0.5


@dataclass(frozen=True, eq=False)
class Model(ABC):
    """A trained binary classifier; immutable once built."""

    kind: str
    n_features: int
    seed: int

    def _check(self, X: np.ndarray) -> np.ndarray:
        X = as_matrix(X)
        if X.shape[0] and X.shape[1] != self.n_features:
            raise ShapeError(
                f"{self.kind} was trained on {self.n_features} features, got {X.shape[1]}"
            )
        return X

    def predict_score(self, X: np.ndarray) -> np.ndarray:
        X = self._check(X)
        if X.shape[0] == 0:
            return np.zeros(0)
        return self._score(X)

    def predict(self, X: np.ndarray) -> np.ndarray:
        # A score of exactly 0.5 predicts 0
        return (self.predict_score(X) > THRESHOLD).astype(np.int64)

    @abstractmethod
    def _score(self, X: np.ndarray) -> np.ndarray:
        ...
