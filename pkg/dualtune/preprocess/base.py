"""Base class for fitted feature transforms."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from sklearn.base import TransformerMixin

from ..errors import ShapeError
from ..utils.math_helpers import as_matrix


@dataclass(frozen=True, eq=False)
class FittedTransform(ABC):
    """Statistics learned on a training matrix, applied to any matrix of the same width."""

    kind: str
    n_features_in: int

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = as_matrix(X)
        if X.shape[0] == 0:
            return np.zeros((0, self.n_features_out))
        if X.shape[1] != self.n_features_in:
            raise ShapeError(
                f"{self.kind} was fitted on {self.n_features_in} columns, got {X.shape[1]}"
            )
        return self._apply(X)

    @property
    def n_features_out(self) -> int:
        return self.n_features_in

    def feature_names_out(self, names: tuple[str, ...]) -> tuple[str, ...]:
        return names

    @abstractmethod
    def _apply(self, X: np.ndarray) -> np.ndarray:
        ...


@dataclass(frozen=True, eq=False)
class Identity(FittedTransform):
    def _apply(self, X: np.ndarray) -> np.ndarray:
        return X.copy()


@dataclass(frozen=True, eq=False)
class FittedEstimator(FittedTransform):
    """A fitted ``sklearn.preprocessing`` transformer."""

    estimator: TransformerMixin = None

    def _apply(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(self.estimator.transform(X), dtype=float)
