"""Learner registry: train, predict and score by spec."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import TrainingError
from ..models.dataset import Dataset
from ..models.pipeline import LearnerKind, LearnerSpec
from .base import Model
from .bayes import train_bayes
from .forest import train_forest
from .knn import train_knn
from .logistic import train_logistic
from .mlp import train_mlp

Trainer = Callable[..., Model]

_TRAINERS: dict[LearnerKind, Trainer] = {
    LearnerKind.RF: train_forest,
    LearnerKind.LR: train_logistic,
    LearnerKind.MLP: train_mlp,
    LearnerKind.KNN: train_knn,
    LearnerKind.NB: train_bayes,
}


def train(spec: LearnerSpec, ds: Dataset, seed: int) -> Model:
    """Fit the learner named by ``spec`` on both classes of ``ds``."""
    if len(ds) == 0 or ds.sbr_count == 0 or ds.nsbr_count == 0:
        raise TrainingError(
            f"{spec.kind.value} needs both classes; got {ds.sbr_count} SBR and "
            f"{ds.nsbr_count} NSBR"
        )
    return _TRAINERS[spec.kind](np.asarray(ds.X), np.asarray(ds.y), seed, **dict(spec.params))


def predict(model: Model, X: np.ndarray) -> np.ndarray:
    return model.predict(X)


def predict_score(model: Model, X: np.ndarray) -> np.ndarray:
    return model.predict_score(X)
