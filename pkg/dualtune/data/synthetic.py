"""Synthetic term-frequency datasets with a rare positive class."""

from __future__ import annotations

import numpy as np

from ..errors import ArgumentError
from ..models.dataset import Dataset
from ..utils.seeding import make_rng


def make_imbalanced(
    n_records: int = 1000,
    n_informative: int = 20,
    positive_rate: float = 0.05,
    seed: int = 0,
    n_noise: int = 10,
    mean_length: float = 60.0,
    length_sigma: float = 1.0,
    separation: float = 1.2,
    concentration: float = 40.0,
) -> Dataset:
    """Generate bug-report-like count vectors.

    Each class has its own word-proportion vector; positives over- or
    under-use the first ``n_informative`` words by a factor of
    ``exp(±separation)``. Report lengths are log-normal, so raw counts mix
    report length with word choice the way real term frequencies do.
    """
    if n_records < 2:
        raise ArgumentError("need at least 2 records")
    if not 0 < positive_rate < 1:
        raise ArgumentError("positive_rate must lie in (0, 1)")
    n_features = n_informative + n_noise
    if n_features < 1:
        raise ArgumentError("need at least one feature")

    rng = make_rng(seed, "synthetic")
    n_pos = min(max(1, int(round(n_records * positive_rate))), n_records - 1)
    y = np.zeros(n_records, dtype=np.int64)
    y[rng.choice(n_records, size=n_pos, replace=False)] = 1

    neg_prop = rng.dirichlet(np.full(n_features, 2.0))
    signs = rng.choice([-1.0, 1.0], size=n_informative)
    tilt = np.ones(n_features)
    tilt[:n_informative] = np.exp(separation * signs)
    pos_prop = neg_prop * tilt
    pos_prop /= pos_prop.sum()

    lengths = np.maximum(
        1, np.round(rng.lognormal(np.log(mean_length), length_sigma, size=n_records))
    ).astype(np.int64)
    X = np.empty((n_records, n_features), dtype=float)
    for i in range(n_records):
        base = pos_prop if y[i] else neg_prop
        p = rng.dirichlet(concentration * base + 1e-3)
        p = p / p.sum()
        X[i] = rng.multinomial(lengths[i], p)

    width = len(str(n_records - 1))
    return Dataset(
        ids=tuple(f"r{i:0{width}d}" for i in range(n_records)),
        X=X,
        y=y,
        feature_names=tuple(f"t{j:02d}" for j in range(n_features)),
        name=f"synthetic-{seed}",
    )


def train_test_split(ds: Dataset, test_fraction: float = 0.5) -> tuple[Dataset, Dataset]:
    """Chronological split: earlier records train, later records test."""
    cut = int(round(len(ds) * (1 - test_fraction)))
    idx = np.arange(len(ds))
    return ds.subset(idx[:cut]), ds.subset(idx[cut:])
