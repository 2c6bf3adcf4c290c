"""Bug-report dataset records, statistics and fold assignments."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np
from pydantic import BaseModel, Field

from ..errors import ArgumentError, ShapeError, ValidationError

SBR = 1  # security bug report
NSBR = 0  # non-security bug report


class ColumnSchema(BaseModel):
    id_column: str = "id"
    label_column: str = "label"
    # Alternative label headers seen in the public FARSEC files
    label_aliases: list[str] = Field(default_factory=lambda: ["Security", "security"])


class DatasetStats(BaseModel):
    n_records: int
    sbr_count: int
    nsbr_count: int
    sbr_pct: float


@dataclass(frozen=True)
class Record:
    """One bug report: opaque id, term-frequency vector, label."""

    id: str
    features: np.ndarray
    label: int


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ordered bug reports sharing one feature space.

    Rows are kept in source order, which is the chronological submission order
    used to break ranking ties.
    """

    ids: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim != 2:
            X = X.reshape(len(self.ids), len(self.feature_names))
        y = np.array(self.y, dtype=np.int64).reshape(-1)
        if X.shape[0] != len(self.ids) or y.shape[0] != len(self.ids):
            raise ShapeError(
                f"ids ({len(self.ids)}), X ({X.shape[0]}) and y ({y.shape[0]}) lengths differ"
            )
        if X.shape[1] != len(self.feature_names):
            raise ShapeError(
                f"X has {X.shape[1]} columns but {len(self.feature_names)} feature names"
            )
        if y.size and not np.isin(y, (NSBR, SBR)).all():
            raise ValidationError("labels must be 0 (NSBR) or 1 (SBR)")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def records(self) -> list[Record]:
        return list(self.iter_records())

    def iter_records(self) -> Iterator[Record]:
        for i, rid in enumerate(self.ids):
            yield Record(id=rid, features=self.X[i], label=int(self.y[i]))

    @property
    def sbr_count(self) -> int:
        return int(self.y.sum())

    @property
    def nsbr_count(self) -> int:
        return len(self) - self.sbr_count

    def stats(self) -> DatasetStats:
        n = len(self)
        return DatasetStats(
            n_records=n,
            sbr_count=self.sbr_count,
            nsbr_count=self.nsbr_count,
            sbr_pct=100.0 * self.sbr_count / n if n else 0.0,
        )

    def subset(self, indices: np.ndarray) -> Dataset:
        """Rows at ``indices``; callers pass ascending indices to keep order."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            ids=tuple(self.ids[i] for i in idx),
            X=self.X[idx],
            y=self.y[idx],
            feature_names=self.feature_names,
            name=self.name,
        )

    def keep(self, mask: np.ndarray) -> Dataset:
        return self.subset(np.flatnonzero(np.asarray(mask, dtype=bool)))

    def with_features(
        self, X: np.ndarray, feature_names: Optional[tuple[str, ...]] = None
    ) -> Dataset:
        """Same records and labels over a transformed feature matrix."""
        X = np.asarray(X, dtype=float)
        names = feature_names or (
            self.feature_names
            if X.shape[1] == self.n_features
            else tuple(f"f{j}" for j in range(X.shape[1]))
        )
        return Dataset(ids=self.ids, X=X, y=self.y, feature_names=names, name=self.name)

    def append(self, ids: list[str], X: np.ndarray, y: np.ndarray) -> Dataset:
        """Originals first, new rows after them."""
        return Dataset(
            ids=self.ids + tuple(ids),
            X=np.vstack([self.X, np.asarray(X, dtype=float).reshape(-1, self.n_features)]),
            y=np.concatenate([self.y, np.asarray(y, dtype=np.int64)]),
            feature_names=self.feature_names,
            name=self.name,
        )

    def equals(self, other: Dataset) -> bool:
        return (
            self.ids == other.ids
            and self.feature_names == other.feature_names
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
        )


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    """Map from record index to a fold id in [0, B)."""

    fold_of: np.ndarray
    B: int
    seed: int = 0
    _folds: list[np.ndarray] = field(default_factory=list, init=False, repr=False, compare=False)

    def __post_init__(self):
        fold_of = np.array(self.fold_of, dtype=np.int64)
        if fold_of.size and (fold_of.min() < 0 or fold_of.max() >= self.B):
            raise ArgumentError(f"fold ids must lie in [0, {self.B})")
        fold_of.setflags(write=False)
        object.__setattr__(self, "fold_of", fold_of)
        object.__setattr__(
            self, "_folds", [np.flatnonzero(fold_of == b) for b in range(self.B)]
        )

    def fold(self, b: int) -> np.ndarray:
        """Ascending record indices of fold b."""
        return self._folds[b]

    def train_indices(self, b: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != b)

    def splits(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """(train, validation) index pairs, one per fold."""
        for b in range(self.B):
            yield self.train_indices(b), self.fold(b)
