"""Pipeline specifications: one pre-processor slot plus one learner."""

from __future__ import annotations

import json
from enum import Enum
from typing import Any

from pydantic import BaseModel, Field, model_validator

from .space import ItemKind, ParamValue, item_for


class LearnerKind(str, Enum):
    RF = "RF"
    LR = "LR"
    MLP = "MLP"
    KNN = "KNN"
    NB = "NB"


class PreprocessorKind(str, Enum):
    SMOTE = "SMOTE"
    NORMALIZER = "Normalizer"
    STANDARD_SCALER = "StandardScaler"
    MIN_MAX_SCALER = "MinMaxScaler"
    MAX_ABS_SCALER = "MaxAbsScaler"
    ROBUST_SCALER = "RobustScaler"
    QUANTILE_TRANSFORMER = "QuantileTransformer"
    POWER_TRANSFORMER = "PowerTransformer"
    BINARIZER = "Binarizer"
    POLYNOMIAL_FEATURES = "PolynomialFeatures"
    NONE = "None"


def _check_params(name: str, expected: ItemKind, params: dict[str, Any]) -> dict[str, Any]:
    item = item_for(name)
    if item.kind != expected:
        raise ValueError(f"{name} is a {item.kind.value}, not a {expected.value}")
    merged = item.defaults()
    for key, value in params.items():
        rng = item.param(key)  # KeyError for undeclared names
        if not rng.admits(value):
            raise ValueError(f"{name}.{key}={value!r} outside tuning range")
        merged[key] = value
    return merged


class _ItemSpec(BaseModel):
    params: dict[str, ParamValue] = Field(default_factory=dict)

    def key(self) -> str:
        return json.dumps(
            {"kind": self.kind.value, "params": self.params}, sort_keys=True, default=str
        )


class PreprocessorSpec(_ItemSpec):
    kind: PreprocessorKind = PreprocessorKind.NONE

    @model_validator(mode="after")
    def _fill(self) -> PreprocessorSpec:
        try:
            self.params = _check_params(self.kind.value, ItemKind.PREPROCESSOR, self.params)
        except KeyError as exc:
            raise ValueError(str(exc)) from exc
        return self

    @property
    def is_smote(self) -> bool:
        return self.kind == PreprocessorKind.SMOTE


class LearnerSpec(_ItemSpec):
    kind: LearnerKind = LearnerKind.NB

    @model_validator(mode="after")
    def _fill(self) -> LearnerSpec:
        try:
            self.params = _check_params(self.kind.value, ItemKind.LEARNER, self.params)
        except KeyError as exc:
            raise ValueError(str(exc)) from exc
        return self


class PipelineSpec(BaseModel):
    preprocessor: PreprocessorSpec = Field(default_factory=PreprocessorSpec)
    learner: LearnerSpec = Field(default_factory=LearnerSpec)

    def key(self) -> str:
        """Canonical string, equal for equal pipelines regardless of param order."""
        return self.preprocessor.key() + "|" + self.learner.key()

    def label(self) -> str:
        return f"{self.preprocessor.kind.value}+{self.learner.kind.value}"

    @classmethod
    def of(
        cls,
        preprocessor: str = "None",
        learner: str = "NB",
        preprocessor_params: dict[str, Any] | None = None,
        learner_params: dict[str, Any] | None = None,
    ) -> PipelineSpec:
        return cls(
            preprocessor=PreprocessorSpec(
                kind=PreprocessorKind(preprocessor), params=preprocessor_params or {}
            ),
            learner=LearnerSpec(kind=LearnerKind(learner), params=learner_params or {}),
        )
