"""Prediction ranking, initial false alarms and decile average precision."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from ..errors import ArgumentError
from ..models.results import RankedList

N_DECILES = 10


def rank_reports(
    scores: np.ndarray,
    order: Optional[np.ndarray] = None,
    labels: Optional[np.ndarray] = None,
    ids: Optional[Sequence[str]] = None,
) -> RankedList:
    """Sort by descending score; equal scores keep chronological order.

    ``order`` gives each record's chronological position (defaults to its
    index). ``indices`` of the result are positions into the input arrays.
    """
    scores = np.asarray(scores, dtype=float).reshape(-1)
    n = scores.shape[0]
    order = np.arange(n) if order is None else np.asarray(order).reshape(-1)
    if order.shape[0] != n:
        raise ArgumentError(f"{n} scores but {order.shape[0]} chronological indices")
    labels = np.zeros(n, dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != n:
        raise ArgumentError(f"{n} scores but {labels.shape[0]} labels")
    ids = tuple(str(i) for i in range(n)) if ids is None else tuple(ids)

    # lexsort uses the last key as primary
    perm = np.lexsort((order, -scores))
    return RankedList(
        indices=perm,
        ids=tuple(ids[i] for i in perm),
        scores=scores[perm],
        labels=labels[perm],
    )


def ifa(ranked: RankedList) -> tuple[int, bool]:
    """False alarms before the first true positive, and whether one was found.

    ``ranked`` holds only the predicted positives, in rank order. With no
    true positive the count is the full list length and the flag is False.
    """
    hits = np.flatnonzero(ranked.labels == 1)
    if hits.size == 0:
        return len(ranked), False
    return int(hits[0]), True


def average_precision(labels: np.ndarray, literal: bool = False) -> float:
    """AP of one ranked label list.

    Standard form: mean of precision@k over the ranks k holding a relevant
    item; 0 with none. With ``literal`` the mean runs over every rank.
    """
    labels = np.asarray(labels, dtype=float)
    if labels.size == 0:
        return 0.0
    precision_at = np.cumsum(labels) / np.arange(1, labels.size + 1)
    if literal:
        return float(precision_at.mean())
    relevant = labels == 1
    if not relevant.any():
        return 0.0
    return float(precision_at[relevant].mean())


def decile_cuts(n: int) -> list[int]:
    return [math.ceil(d * n / N_DECILES) for d in range(1, N_DECILES + 1)]


def map_deciles(ranked: RankedList, literal: bool = False) -> list[float]:
    """AP over the top ceil(d·N/10) entries for d = 1..10."""
    if len(ranked) < N_DECILES:
        raise ArgumentError(f"need at least {N_DECILES} ranked entries, got {len(ranked)}")
    return [average_precision(ranked.labels[:cut], literal) for cut in decile_cuts(len(ranked))]


def mean_average_precision(deciles: Sequence[float]) -> float:
    return float(np.mean(deciles)) if len(deciles) else 0.0
