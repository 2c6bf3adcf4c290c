from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from dualtune.data.loader import write_dataset
from dualtune.models.dataset import Dataset

FIXTURES = Path(__file__).parent / "fixtures"


def make_separable(n_pos: int, n_neg: int, seed: int = 0, name: str = "sep") -> Dataset:
    """Positives load on t0, negatives on t1, t2 is shared noise."""
    rng = np.random.default_rng(seed)
    pos = np.column_stack(
        [rng.integers(8, 11, n_pos), rng.integers(0, 2, n_pos), rng.integers(0, 3, n_pos)]
    )
    neg = np.column_stack(
        [rng.integers(0, 2, n_neg), rng.integers(8, 11, n_neg), rng.integers(0, 3, n_neg)]
    )
    X = np.vstack([pos, neg]).astype(float)
    y = np.array([1] * n_pos + [0] * n_neg)
    order = rng.permutation(n_pos + n_neg)
    return Dataset(
        ids=tuple(f"{name}{i:03d}" for i in range(n_pos + n_neg)),
        X=X[order],
        y=y[order],
        feature_names=("t0", "t1", "t2"),
        name=name,
    )


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def tiny_csv() -> Path:
    return FIXTURES / "tiny.csv"


@pytest.fixture
def separable_train() -> Dataset:
    return make_separable(8, 32, seed=1, name="tr")


@pytest.fixture
def separable_test() -> Dataset:
    return make_separable(4, 16, seed=2, name="te")


@pytest.fixture
def separable_csvs(tmp_path, separable_train, separable_test) -> tuple[Path, Path]:
    train = write_dataset(separable_train, tmp_path / "sep_train.csv")
    test = write_dataset(separable_test, tmp_path / "sep_test.csv")
    return train, test


@pytest.fixture
def separable_factory():
    return make_separable
