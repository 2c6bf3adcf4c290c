"""Column scalers, row normaliser and binariser."""

from __future__ import annotations

import numpy as np
from sklearn.preprocessing import (
    Binarizer,
    MaxAbsScaler,
    MinMaxScaler,
    Normalizer,
    RobustScaler,
    StandardScaler,
)

from ..errors import ArgumentError
from .base import FittedEstimator


def _fitted(kind: str, estimator, X: np.ndarray) -> FittedEstimator:
    return FittedEstimator(kind=kind, n_features_in=X.shape[1], estimator=estimator.fit(X))


def fit_normalizer(X: np.ndarray, norm: str = "l2", **_) -> FittedEstimator:
    """Row scaling to unit norm; all-zero rows stay zero."""
    if norm not in ("l1", "l2", "max"):
        raise ArgumentError(f"unknown norm {norm!r}")
    return _fitted("Normalizer", Normalizer(norm=norm), X)


def fit_standard_scaler(
    X: np.ndarray, with_mean: bool = True, with_std: bool = True, **_
) -> FittedEstimator:
    # Zero-variance columns get scale 1 and map to 0
    return _fitted("StandardScaler", StandardScaler(with_mean=with_mean, with_std=with_std), X)


def fit_min_max_scaler(
    X: np.ndarray, min: float = 0.0, max: float = 1.0, **_
) -> FittedEstimator:
    if min >= max:
        raise ArgumentError(f"MinMaxScaler needs min < max, got ({min}, {max})")
    return _fitted("MinMaxScaler", MinMaxScaler(feature_range=(float(min), float(max))), X)


def fit_max_abs_scaler(X: np.ndarray, **_) -> FittedEstimator:
    return _fitted("MaxAbsScaler", MaxAbsScaler(), X)


def fit_robust_scaler(
    X: np.ndarray,
    with_centering: bool = True,
    with_scaling: bool = True,
    q_min: float = 25.0,
    q_max: float = 75.0,
    **_,
) -> FittedEstimator:
    """Median centring and inter-quantile scaling (linear interpolation quantiles)."""
    if not 0 <= q_min < q_max <= 100:
        raise ArgumentError(
            f"RobustScaler needs 0 <= q_min < q_max <= 100, got ({q_min}, {q_max})"
        )
    scaler = RobustScaler(
        with_centering=with_centering,
        with_scaling=with_scaling,
        quantile_range=(float(q_min), float(q_max)),
    )
    return _fitted("RobustScaler", scaler, X)


def fit_binarizer(X: np.ndarray, threshold: float = 0.0, **_) -> FittedEstimator:
    return _fitted("Binarizer", Binarizer(threshold=float(threshold)), X)
