import numpy as np
import pytest

from dualtune.data.folds import split_folds
from dualtune.data.loader import load_dataset, write_dataset
from dualtune.data.synthetic import make_imbalanced, train_test_split
from dualtune.errors import ArgumentError, ParseError, SchemaError, ShapeError, ValidationError
from dualtune.models.dataset import Dataset


def test_load_tiny_counts(tiny_csv):
    ds = load_dataset(tiny_csv)
    assert len(ds) == 3
    assert ds.sbr_count == 1
    assert ds.nsbr_count == 2
    assert ds.ids == ("r1", "r2", "r3")
    assert ds.feature_names == ("t1", "t2", "t3")
    assert ds.name == "tiny"
    np.testing.assert_array_equal(ds.X[0], [3, 0, 1])


def test_stats_percentage(tiny_csv):
    stats = load_dataset(tiny_csv).stats()
    assert stats.n_records == 3
    assert stats.sbr_pct == pytest.approx(100 / 3)


def test_header_only_has_no_records(fixtures_dir):
    with pytest.raises(ValidationError, match="no records"):
        load_dataset(fixtures_dir / "header_only.csv")


def test_security_alias_label(fixtures_dir):
    ds = load_dataset(fixtures_dir / "security_header.csv")
    assert list(ds.y) == [1, 0]
    assert ds.feature_names == ("t1", "t2")


def test_parse_error_reports_row(fixtures_dir):
    with pytest.raises(ParseError) as info:
        load_dataset(fixtures_dir / "bad_cell.csv")
    assert info.value.row == 1
    assert info.value.column == "t1"


def test_missing_label_column(tmp_path):
    path = tmp_path / "nolabel.csv"
    path.write_text("id,t1,t2\nr1,1,0\n")
    with pytest.raises(SchemaError):
        load_dataset(path)


@pytest.mark.parametrize(
    "body",
    ["id,t1,label\nr1,1,2\n", "id,t1,label\nr1,-1,1\n", "id,t1,label\nr1,1,yes\n"],
)
def test_invalid_content(tmp_path, body):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(ValidationError):
        load_dataset(path)


def test_write_then_load_is_identical(tmp_path, tiny_csv):
    ds = load_dataset(tiny_csv)
    again = load_dataset(write_dataset(ds, tmp_path / "tiny.csv"))
    assert again.equals(ds)


def test_dataset_shape_checks():
    with pytest.raises(ShapeError):
        Dataset(ids=("a", "b"), X=np.zeros((3, 1)), y=[0, 1, 0], feature_names=("t",))
    with pytest.raises(ValidationError):
        Dataset(ids=("a",), X=np.zeros((1, 1)), y=[2], feature_names=("t",))


def test_dataset_is_read_only(tiny_csv):
    ds = load_dataset(tiny_csv)
    with pytest.raises(ValueError):
        ds.X[0, 0] = 99


def test_subset_and_append_keep_order(tiny_csv):
    ds = load_dataset(tiny_csv)
    sub = ds.subset(np.array([0, 2]))
    assert sub.ids == ("r1", "r3")
    grown = sub.append(["s0"], np.array([[1, 1, 1]]), np.array([1]))
    assert grown.ids == ("r1", "r3", "s0")
    assert grown.sbr_count == 2


def _small(n_pos, n_neg):
    y = [1] * n_pos + [0] * n_neg
    n = len(y)
    return Dataset(
        ids=tuple(str(i) for i in range(n)),
        X=np.arange(n, dtype=float).reshape(-1, 1),
        y=y,
        feature_names=("t",),
    )


@pytest.mark.parametrize("seed", [0, 1, 7, 123])
def test_folds_split_positives_evenly(seed):
    ds = _small(2, 8)
    folds = split_folds(ds, 2, seed)
    for b in range(2):
        assert ds.y[folds.fold(b)].sum() == 1


def test_folds_are_deterministic():
    ds = make_imbalanced(60, seed=3)
    a = split_folds(ds, 5, 11)
    b = split_folds(ds, 5, 11)
    np.testing.assert_array_equal(a.fold_of, b.fold_of)


def test_folds_of_hundred_records():
    ds = make_imbalanced(100, seed=2)
    folds = split_folds(ds, 10, 4)
    sizes = [folds.fold(b).size for b in range(10)]
    assert sizes == [10] * 10
    joined = np.sort(np.concatenate([folds.fold(b) for b in range(10)]))
    np.testing.assert_array_equal(joined, np.arange(100))


def test_folds_are_stratified():
    ds = make_imbalanced(230, positive_rate=0.1, seed=5)
    B = 7
    folds = split_folds(ds, B, 0)
    share = ds.sbr_count / B
    for b in range(B):
        count = ds.y[folds.fold(b)].sum()
        assert np.floor(share) <= count <= np.ceil(share)
    for train, valid in folds.splits():
        assert np.intersect1d(train, valid).size == 0
        assert train.size + valid.size == len(ds)


def test_fold_argument_errors():
    ds = _small(1, 3)
    with pytest.raises(ArgumentError):
        split_folds(ds, 5, 0)
    with pytest.raises(ArgumentError):
        split_folds(ds, 1, 0)


def test_synthetic_counts_and_split():
    ds = make_imbalanced(1000, seed=0)
    assert len(ds) == 1000
    assert ds.sbr_count == 50
    assert (ds.X >= 0).all()
    train, test = train_test_split(ds)
    assert len(train) == len(test) == 500
    assert train.ids[-1] < test.ids[0]


def test_synthetic_is_seeded():
    assert make_imbalanced(200, seed=9).equals(make_imbalanced(200, seed=9))
    assert not make_imbalanced(200, seed=9).equals(make_imbalanced(200, seed=10))
