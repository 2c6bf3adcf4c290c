"""Closest List Noise Identification."""

from __future__ import annotations

import logging

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import ArgumentError
from ..models.config import ClniParams
from ..models.dataset import Dataset

logger = logging.getLogger(__name__)

CHUNK_ROWS = 512


def noise_votes(
    X: np.ndarray, y: np.ndarray, N: int, excluded: np.ndarray
) -> np.ndarray:
    """Fraction of each instance's N nearest neighbours carrying the other label.

    Instances in ``excluded`` are not eligible as neighbours. Ties in distance
    go to the earlier record.
    """
    n = X.shape[0]
    out = np.zeros(n)
    for start in range(0, n, CHUNK_ROWS):
        stop = min(start + CHUNK_ROWS, n)
        D = cdist(X[start:stop], X, metric="euclidean")
        D[:, excluded] = np.inf
        D[np.arange(stop - start), np.arange(start, stop)] = np.inf
        k = min(N, n - 1)
        nn = np.argsort(D, axis=1, kind="stable")[:, :k]
        finite = np.isfinite(np.take_along_axis(D, nn, axis=1))
        differs = (y[nn] != y[start:stop, None]) & finite
        counts = finite.sum(axis=1)
        out[start:stop] = np.where(counts > 0, differs.sum(axis=1) / np.maximum(counts, 1), 0.0)
    return out


def _jaccard(a: np.ndarray, b: np.ndarray) -> float:
    union = np.logical_or(a, b).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(a, b).sum() / union)


def _iterate(train: Dataset, p: ClniParams) -> tuple[np.ndarray, np.ndarray]:
    """Final noise mask and the noise fractions of the round that produced it."""
    n = len(train)
    noise = np.zeros(n, dtype=bool)
    votes = np.zeros(n)
    if n == 0 or np.all(train.X == train.X[0]):
        return noise, votes
    for it in range(1, p.max_iterations + 1):
        votes = noise_votes(train.X, train.y, p.N, excluded=noise)
        current = votes >= p.noise_threshold
        similarity = _jaccard(current, noise)
        logger.debug(
            "clni iteration %d: %d noisy, similarity %.3f", it, int(current.sum()), similarity
        )
        stop = similarity >= p.stop_similarity or (not current.any() and not noise.any())
        noise = current
        if stop:
            break
    else:
        logger.info("clni hit the %d-iteration cap", p.max_iterations)
    return noise, votes


def find_noise(train: Dataset, p: ClniParams) -> np.ndarray:
    """Boolean mask of the final noise set (either class)."""
    return _iterate(train, p)[0]


def apply_clni(train: Dataset, p: ClniParams | None = None) -> Dataset:
    """Remove non-security reports that CLNI marks as noise.

    A noisy NSBR is dropped only when its final noise fraction also reaches
    ``removal_limit``.
    """
    p = p or ClniParams()
    if len(train) <= p.N:
        raise ArgumentError(f"CLNI needs more than N={p.N} records, got {len(train)}")
    noise, votes = _iterate(train, p)
    drop = noise & (votes >= p.removal_limit) & (train.y == 0)
    logger.info("clni removed %d of %d NSBRs", int(drop.sum()), train.nsbr_count)
    return train.keep(~drop)
