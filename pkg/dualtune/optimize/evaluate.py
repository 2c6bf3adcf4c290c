"""Fold-wise pipeline evaluation and the final train/test fit."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import ArgumentError, ShapeError, ValidationError
from ..learners.registry import train as train_learner
from ..metrics.confusion import evaluate
from ..metrics.ranking import rank_reports
from ..models.dataset import Dataset, FoldAssignment
from ..models.pipeline import PipelineSpec
from ..models.results import EvalResult, RankedList
from ..preprocess.registry import fit as fit_preprocessor
from ..preprocess.registry import resample, transform_dataset
from ..utils.seeding import derive_seed

logger = logging.getLogger(__name__)

GOALS = ("g", "pd", "pf", "f", "prec")


@dataclass
class CrossValidation:
    """Mean goal value over folds, plus per-fold results."""

    value: float
    folds: list[EvalResult]
    flags: list[str] = field(default_factory=list)


def fit_and_score(
    p: PipelineSpec, train: Dataset, target: Dataset, seed: int
) -> np.ndarray:
    """Fit the pipeline on ``train`` only and return scores for ``target``."""
    ft = fit_preprocessor(p.preprocessor, train.X, seed=seed)
    fit_rows = transform_dataset(ft, train)
    fit_rows = resample(p.preprocessor, fit_rows, seed)
    model = train_learner(p.learner, fit_rows, seed)
    return model.predict_score(ft.transform(target.X))


def cross_validate(
    p: PipelineSpec, train: Dataset, folds: FoldAssignment, goal: str = "g", seed: int = 0
) -> CrossValidation:
    if goal not in GOALS:
        raise ArgumentError(f"unknown goal {goal!r}; expected one of {GOALS}")
    results: list[EvalResult] = []
    flags: set[str] = set()
    for b, (fit_idx, val_idx) in enumerate(folds.splits()):
        fit_rows = train.subset(fit_idx)
        val_rows = train.subset(val_idx)
        scores = fit_and_score(p, fit_rows, val_rows, derive_seed(seed, "fold", b))
        res = evaluate(val_rows.y, scores)
        if res.undefined:
            logger.debug("fold %d: %s undefined, counted as 0", b, ", ".join(res.undefined))
            flags.update(res.undefined)
        results.append(res)
    value = float(np.mean([r.value(goal) for r in results]))
    return CrossValidation(value=value, folds=results, flags=sorted(flags))


def evaluate_pipeline(
    p: PipelineSpec, train: Dataset, folds: FoldAssignment, goal: str = "g", seed: int = 0
) -> float:
    """Mean goal value across folds; transforms never see validation rows when fitting."""
    return cross_validate(p, train, folds, goal, seed).value


def final_fit_and_test(
    p: PipelineSpec, train: Dataset, test: Dataset, seed: int = 0
) -> tuple[EvalResult, RankedList]:
    if len(test) == 0:
        raise ValidationError("test set has no records")
    if train.n_features != test.n_features:
        raise ShapeError(
            f"train has {train.n_features} features but test has {test.n_features}"
        )
    scores = fit_and_score(p, train, test, derive_seed(seed, "final"))
    ranked = rank_reports(scores, labels=test.y, ids=test.ids)
    return evaluate(test.y, scores), ranked
