"""Polynomial and interaction feature expansion."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from sklearn.preprocessing import PolynomialFeatures

from ..errors import ArgumentError, DomainError
from .base import FittedEstimator

MAX_OUTPUT_COLUMNS = 10_000
MAX_OUTPUT_CELLS = 50_000_000


def output_width(n: int, degree: int, include_bias: bool, interaction_only: bool) -> int:
    """Number of monomials of total degree 1..degree, plus the bias column."""
    if interaction_only:
        width = sum(comb(n, k) for k in range(1, degree + 1))
    else:
        width = sum(comb(n + k - 1, k) for k in range(1, degree + 1))
    return width + (1 if include_bias else 0)


@dataclass(frozen=True, eq=False)
class FittedPolynomial(FittedEstimator):
    @property
    def n_features_out(self) -> int:
        return int(self.estimator.n_output_features_)

    def feature_names_out(self, names: tuple[str, ...]) -> tuple[str, ...]:
        """Products spelled out, so a*a rather than a^2; the bias column is "1"."""
        return tuple(
            "*".join(name for name, p in zip(names, row) for _ in range(p)) or "1"
            for row in self.estimator.powers_
        )

    def _apply(self, X: np.ndarray) -> np.ndarray:
        if X.shape[0] * self.n_features_out > MAX_OUTPUT_CELLS:
            raise DomainError(
                f"polynomial expansion to {self.n_features_out} columns is too large "
                f"for {X.shape[0]} rows"
            )
        return super()._apply(X)


def fit_polynomial_features(
    X: np.ndarray,
    degree: int = 2,
    interaction_only: bool = False,
    include_bias: bool = True,
    **_,
) -> FittedPolynomial:
    if degree < 1:
        raise ArgumentError("degree must be at least 1")
    n = X.shape[1]
    width = output_width(n, degree, include_bias, interaction_only)
    if width > MAX_OUTPUT_COLUMNS or width * X.shape[0] > MAX_OUTPUT_CELLS:
        raise DomainError(f"degree-{degree} expansion of {n} columns gives {width} columns")
    pf = PolynomialFeatures(
        degree=int(degree), interaction_only=interaction_only, include_bias=include_bias
    )
    return FittedPolynomial(kind="PolynomialFeatures", n_features_in=n, estimator=pf.fit(X))
