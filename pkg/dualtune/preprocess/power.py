"""Yeo-Johnson and Box-Cox power transforms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.preprocessing import PowerTransformer

from ..errors import ArgumentError, DomainError
from .base import FittedEstimator


def _check_positive(X: np.ndarray) -> None:
    bad = np.flatnonzero((X <= 0).any(axis=0))
    if bad.size:
        raise DomainError(f"box-cox requires strictly positive data; column {bad[0]} is not")


@dataclass(frozen=True, eq=False)
class FittedPower(FittedEstimator):
    method: str = "yeo-johnson"

    @property
    def lambdas(self) -> np.ndarray:
        return self.estimator.lambdas_

    def _apply(self, X: np.ndarray) -> np.ndarray:
        if self.method == "box-cox":
            _check_positive(X)
        with np.errstate(over="ignore", invalid="ignore"):
            return super()._apply(X)


def fit_power_transformer(
    X: np.ndarray, method: str = "yeo-johnson", standardize: bool = True, **_
) -> FittedPower:
    if method not in ("yeo-johnson", "box-cox"):
        raise ArgumentError(f"unknown power method {method!r}")
    if method == "box-cox":
        _check_positive(X)
    pt = PowerTransformer(method=method, standardize=standardize)
    try:
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            pt.fit(X)
    except ValueError as exc:
        raise DomainError(f"{method} fit failed: {exc}") from exc
    fitted = FittedPower(
        kind="PowerTransformer", n_features_in=X.shape[1], estimator=pt, method=method
    )
    out = fitted.transform(X)
    if not np.isfinite(out).all():
        col = int(np.flatnonzero(~np.isfinite(out).all(axis=0))[0])
        raise DomainError(f"power transform overflowed on column {col}")
    return fitted
