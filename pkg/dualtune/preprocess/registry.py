"""Pre-processor registry: fit, transform and SMOTE resampling by spec."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import ArgumentError
from ..models.dataset import Dataset
from ..models.pipeline import PreprocessorKind, PreprocessorSpec
from ..utils.math_helpers import as_matrix
from .base import FittedTransform, Identity
from .polynomial import fit_polynomial_features
from .power import fit_power_transformer
from .quantile import fit_quantile_transformer
from .scalers import (
    fit_binarizer,
    fit_max_abs_scaler,
    fit_min_max_scaler,
    fit_normalizer,
    fit_robust_scaler,
    fit_standard_scaler,
)
from .smote import smote

Fitter = Callable[..., FittedTransform]

_FITTERS: dict[PreprocessorKind, Fitter] = {
    PreprocessorKind.NORMALIZER: fit_normalizer,
    PreprocessorKind.STANDARD_SCALER: fit_standard_scaler,
    PreprocessorKind.MIN_MAX_SCALER: fit_min_max_scaler,
    PreprocessorKind.MAX_ABS_SCALER: fit_max_abs_scaler,
    PreprocessorKind.ROBUST_SCALER: fit_robust_scaler,
    PreprocessorKind.QUANTILE_TRANSFORMER: fit_quantile_transformer,
    PreprocessorKind.POWER_TRANSFORMER: fit_power_transformer,
    PreprocessorKind.BINARIZER: fit_binarizer,
    PreprocessorKind.POLYNOMIAL_FEATURES: fit_polynomial_features,
}

# Layout flags accepted in specs with no effect on the output
_INERT = {"copy", "order"}


def fit(spec: PreprocessorSpec, X: np.ndarray, seed: int = 0) -> FittedTransform:
    """Learn column statistics from X only. SMOTE and None fit to the identity."""
    X = as_matrix(X)
    if X.shape[0] == 0:
        raise ArgumentError(f"cannot fit {spec.kind.value} on an empty matrix")
    fitter = _FITTERS.get(spec.kind)
    if fitter is None:
        return Identity(kind=spec.kind.value, n_features_in=X.shape[1])
    params = {k: v for k, v in spec.params.items() if k not in _INERT}
    if spec.kind == PreprocessorKind.QUANTILE_TRANSFORMER:
        params["seed"] = seed
    return fitter(X, **params)


def transform(ft: FittedTransform, X: np.ndarray) -> np.ndarray:
    return ft.transform(X)


def transform_dataset(ft: FittedTransform, ds: Dataset) -> Dataset:
    return ds.with_features(ft.transform(ds.X), ft.feature_names_out(ds.feature_names))


def resample(spec: PreprocessorSpec, ds: Dataset, seed: int) -> Dataset:
    """Apply SMOTE when the spec selects it; every other kind leaves rows alone."""
    if spec.kind != PreprocessorKind.SMOTE:
        return ds
    p = spec.params
    return smote(ds, k=int(p["k"]), m=float(p["m"]), r=float(p["r"]), seed=seed)
