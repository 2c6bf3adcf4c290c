"""Stratified fold assignment."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import ArgumentError
from ..models.dataset import Dataset, FoldAssignment
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)


def split_folds(ds: Dataset, B: int, seed: int) -> FoldAssignment:
    """Assign every record to one of B stratified folds.

    Each class is shuffled with a seeded generator, positives are laid out
    before negatives, and fold ids are dealt cyclically over that sequence.
    Fold sizes then differ by at most one and every fold holds either
    floor or ceil of its share of positives.
    """
    n = len(ds)
    if B < 2:
        raise ArgumentError(f"need at least 2 folds, got {B}")
    if B > n:
        raise ArgumentError(f"cannot split {n} records into {B} folds")

    rng = make_rng(seed, "folds", n, B)
    pos = np.flatnonzero(ds.y == 1)
    neg = np.flatnonzero(ds.y == 0)
    order = np.concatenate([rng.permutation(pos), rng.permutation(neg)])

    fold_of = np.empty(n, dtype=np.int64)
    fold_of[order] = np.arange(n) % B
    folds = FoldAssignment(fold_of=fold_of, B=B, seed=seed)

    empty = [b for b in range(B) if not ds.y[folds.fold(b)].any()]
    if empty:
        logger.warning(
            "%d of %d folds contain no positives (%d SBR in %d records)",
            len(empty), B, len(pos), n,
        )
    return folds
