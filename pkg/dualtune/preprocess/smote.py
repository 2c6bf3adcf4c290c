"""SMOTE oversampling of the minority class."""

from __future__ import annotations

import logging

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import OversamplingError
from ..models.dataset import Dataset
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)


def minority_label(y: np.ndarray) -> int:
    """The rarer class; label 1 on a tie."""
    pos = int(np.sum(y == 1))
    return 1 if pos <= len(y) - pos else 0


def nearest_minority(X_min: np.ndarray, k: int, r: float) -> np.ndarray:
    """Indices of the k nearest other minority points under Minkowski-r distance."""
    D = cdist(X_min, X_min, metric="minkowski", p=r)
    np.fill_diagonal(D, np.inf)
    return np.argsort(D, axis=1, kind="stable")[:, :k]


def synthesize(
    X_min: np.ndarray, n_new: int, k: int, r: float, rng: np.random.Generator
) -> np.ndarray:
    """Points x + u·(x_nn - x) on segments between minority neighbours."""
    if n_new <= 0:
        return np.zeros((0, X_min.shape[1]))
    nn = nearest_minority(X_min, k, r)
    base = rng.integers(0, X_min.shape[0], size=n_new)
    pick = nn[base, rng.integers(0, k, size=n_new)]
    u = rng.random(n_new)[:, None]
    return X_min[base] + u * (X_min[pick] - X_min[base])


def smote(ds: Dataset, k: int = 5, m: float = 50, r: float = 2, seed: int = 0) -> Dataset:
    """Append floor(m/100 · minority count) synthetic minority records after the originals."""
    label = minority_label(ds.y)
    X_min = ds.X[ds.y == label]
    count = X_min.shape[0]
    if count < 2:
        raise OversamplingError(f"SMOTE needs at least 2 minority records, got {count}")
    if k > count - 1:
        logger.warning("SMOTE k=%d exceeds minority count - 1; using k=%d", k, count - 1)
        k = count - 1
    n_new = int(np.floor(m * count / 100.0 + 1e-9))
    rng = make_rng(seed, "smote")
    X_new = synthesize(X_min, n_new, int(k), float(r), rng)
    logger.debug("SMOTE: %d minority records, %d synthesised", count, n_new)
    return ds.append(
        ids=[f"smote-{i}" for i in range(n_new)],
        X=X_new,
        y=np.full(n_new, label, dtype=np.int64),
    )
