"""Read and write bug-report datasets in the FARSEC CSV layout."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from ..errors import ParseError, SchemaError, ValidationError
from ..models.dataset import ColumnSchema, Dataset

logger = logging.getLogger(__name__)


def _label_column(columns: list[str], schema: ColumnSchema) -> str:
    for name in [schema.label_column, *schema.label_aliases]:
        if name in columns:
            return name
    raise SchemaError(
        f"no label column (looked for {schema.label_column!r} and aliases "
        f"{schema.label_aliases})"
    )


def load_dataset(path: str | Path, schema: Optional[ColumnSchema] = None) -> Dataset:
    """Load a CSV with an id column, numeric feature columns and a 0/1 label column.

    Row order is kept as-is: it is the submission order used for ranking ties.
    """
    schema = schema or ColumnSchema()
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError as exc:
        raise SchemaError(f"{path}: no header row") from exc

    columns = [str(c) for c in frame.columns]
    label_col = _label_column(columns, schema)
    id_col = schema.id_column if schema.id_column in columns else None
    feature_cols = [c for c in columns if c not in (label_col, id_col)]
    if not feature_cols:
        raise SchemaError(f"{path}: no feature columns")
    if frame.empty:
        raise ValidationError(f"{path}: no records")

    features = frame[feature_cols].apply(lambda s: pd.to_numeric(s.str.strip(), errors="coerce"))
    bad = features.isna().to_numpy()
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise ParseError(
            f"{path}: non-numeric feature {feature_cols[col]!r} at row {row + 1}: "
            f"{frame.iat[row, columns.index(feature_cols[col])]!r}",
            row=int(row),
            column=feature_cols[col],
        )
    X = features.to_numpy(dtype=float)
    if (X < 0).any():
        row = int(np.argwhere(X < 0)[0][0])
        raise ValidationError(f"{path}: negative term frequency at row {row + 1}")

    labels = pd.to_numeric(frame[label_col].str.strip(), errors="coerce").to_numpy()
    valid = np.isin(labels, (0, 1))
    if not valid.all():
        row = int(np.flatnonzero(~valid)[0])
        raise ValidationError(
            f"{path}: label {frame[label_col].iat[row]!r} at row {row + 1} is not 0 or 1"
        )

    ids = (
        tuple(frame[id_col].astype(str))
        if id_col is not None
        else tuple(str(i) for i in range(len(frame)))
    )
    ds = Dataset(
        ids=ids,
        X=X,
        y=labels.astype(np.int64),
        feature_names=tuple(feature_cols),
        name=path.stem,
    )
    stats = ds.stats()
    logger.info(
        "loaded %s: %d records, %d SBR (%.2f%%)",
        path.name, stats.n_records, stats.sbr_count, stats.sbr_pct,
    )
    return ds


def dataset_frame(ds: Dataset, schema: Optional[ColumnSchema] = None) -> pd.DataFrame:
    schema = schema or ColumnSchema()
    X = ds.X
    if X.size and np.array_equal(X, np.round(X)):
        body = pd.DataFrame(X.astype(np.int64), columns=list(ds.feature_names))
    else:
        body = pd.DataFrame(X, columns=list(ds.feature_names))
    body.insert(0, schema.id_column, list(ds.ids))
    body[schema.label_column] = ds.y.astype(np.int64)
    return body


def write_dataset(ds: Dataset, path: str | Path, schema: Optional[ColumnSchema] = None) -> Path:
    """Write ``ds`` back in the layout ``load_dataset`` reads."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dataset_frame(ds, schema).to_csv(path, index=False, lineterminator="\n")
    return path
