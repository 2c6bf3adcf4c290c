"""FARSEC keyword scoring and irrelevancy pruning."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import ArgumentError, FilterError
from ..models.dataset import Dataset, Record
from ..utils.math_helpers import sigmoid

logger = logging.getLogger(__name__)

SCORE_MIN = 0.01
SCORE_MAX = 0.99


class SupportKind(str, Enum):
    PLAIN = "plain"
    SQUARED = "squared"
    TIMES_TWO = "times_two"


@dataclass(frozen=True)
class KeywordScores:
    """Per-token security scores plus the top-K keyword set.

    ``scores`` only covers tokens that occur in at least one report.
    """

    scores: dict[str, float]
    keyword_set: tuple[str, ...]
    feature_index: dict[str, int]

    @property
    def keyword_columns(self) -> np.ndarray:
        return np.array([self.feature_index[w] for w in self.keyword_set], dtype=np.int64)

    @property
    def keyword_values(self) -> np.ndarray:
        return np.array([self.scores[w] for w in self.keyword_set], dtype=float)


def score_keywords(train: Dataset, kind: SupportKind, K: int = 100) -> KeywordScores:
    """Graham-style score of every token, from document frequencies per class."""
    if K < 1:
        raise ArgumentError("K must be at least 1")
    sbr = train.y == 1
    n_s = int(sbr.sum())
    n_ns = len(train) - n_s
    if n_s == 0:
        raise FilterError("cannot score keywords without positives")

    present = train.X > 0
    df_s = present[sbr].sum(axis=0).astype(float)
    df_ns = present[~sbr].sum(axis=0).astype(float)

    num_s = df_s**2 if kind == SupportKind.SQUARED else df_s
    g = 2.0 if kind == SupportKind.TIMES_TWO else 1.0
    p_s = np.minimum(1.0, num_s / n_s)
    p_ns = np.minimum(1.0, g * df_ns / n_ns) if n_ns else np.zeros_like(df_ns)

    seen = (df_s + df_ns) > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = np.where(seen, p_s / (p_s + p_ns), 0.0)
    clipped = np.clip(raw, SCORE_MIN, SCORE_MAX)

    cols = np.flatnonzero(seen)
    names = train.feature_names
    scores = {names[j]: float(clipped[j]) for j in cols}
    # Stable sort keeps feature order among equal scores
    ranked = cols[np.argsort(-clipped[cols], kind="stable")]
    keyword_set = tuple(names[j] for j in ranked[:K])
    logger.debug(
        "%s support: %d scored tokens, top score %.3f",
        kind.value, len(scores), clipped[ranked[0]] if len(ranked) else 0.0,
    )
    return KeywordScores(
        scores=scores,
        keyword_set=keyword_set,
        feature_index={w: j for j, w in enumerate(names)},
    )


def _combine(present: np.ndarray, log_s: np.ndarray, log_not_s: np.ndarray) -> np.ndarray:
    # P = Πs / (Πs + Π(1-s)) evaluated as sigmoid(Σlog s - Σlog(1-s))
    z = present @ log_s - present @ log_not_s
    out = sigmoid(z)
    return np.where(present.any(axis=1), out, 0.0)


def score_matrix(X: np.ndarray, scores: KeywordScores) -> np.ndarray:
    """Report scores for every row of a feature matrix."""
    X = np.asarray(X, dtype=float)
    if not scores.keyword_set:
        return np.zeros(X.shape[0])
    s = scores.keyword_values
    present = (X[:, scores.keyword_columns] > 0).astype(float)
    return _combine(present, np.log(s), np.log1p(-s))


def score_report(record: Record, scores: KeywordScores) -> float:
    """Combined security probability of one report; 0.0 when no keyword occurs."""
    return float(score_matrix(record.features.reshape(1, -1), scores)[0])


def apply_farsec_filter(train: Dataset, scores: KeywordScores, cutoff: float = 0.75) -> Dataset:
    """Drop non-security reports whose score reaches ``cutoff``."""
    if not 0 < cutoff < 1:
        raise ArgumentError(f"cutoff must lie in (0, 1), got {cutoff}")
    report_scores = score_matrix(train.X, scores)
    drop = (train.y == 0) & (report_scores >= cutoff)
    logger.info("farsec filter removed %d of %d NSBRs", int(drop.sum()), train.nsbr_count)
    return train.keep(~drop)
