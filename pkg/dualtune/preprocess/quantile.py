"""Quantile transform to a uniform or normal output distribution."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from sklearn.preprocessing import QuantileTransformer

from ..errors import ArgumentError
from ..utils.seeding import derive_seed
from .base import FittedEstimator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FittedQuantile(FittedEstimator):
    ignore_implicit_zeros: bool = False

    @property
    def quantiles(self) -> np.ndarray:
        """Reference quantiles, shape (n_quantiles, n_features)."""
        return self.estimator.quantiles_

    def _apply(self, X: np.ndarray) -> np.ndarray:
        if not self.ignore_implicit_zeros:
            return super()._apply(X)
        # Sparse input keeps zeros out of the mapping
        return self.estimator.transform(sparse.csc_matrix(X)).toarray()


def fit_quantile_transformer(
    X: np.ndarray,
    n_quantiles: int = 1000,
    output_distribution: str = "uniform",
    ignore_implicit_zeros: bool = False,
    subsample: int = 100000,
    seed: int = 0,
    **_,
) -> FittedQuantile:
    if output_distribution not in ("uniform", "normal"):
        raise ArgumentError(f"unknown output_distribution {output_distribution!r}")
    n_rows = X.shape[0]
    usable = min(n_rows, int(subsample))
    if n_quantiles > usable:
        logger.warning("n_quantiles=%d exceeds %d rows; using %d", n_quantiles, usable, usable)
        n_quantiles = usable
    qt = QuantileTransformer(
        n_quantiles=max(int(n_quantiles), 1),
        output_distribution=output_distribution,
        ignore_implicit_zeros=ignore_implicit_zeros,
        subsample=int(subsample),
        random_state=derive_seed(seed, "quantile-subsample"),
    )
    qt.fit(sparse.csc_matrix(X) if ignore_implicit_zeros else X)
    return FittedQuantile(
        kind="QuantileTransformer",
        n_features_in=X.shape[1],
        estimator=qt,
        ignore_implicit_zeros=ignore_implicit_zeros,
    )
