import logging
from itertools import permutations

import numpy as np
import pytest

from dualtune.errors import ArgumentError, DomainError, OversamplingError, ShapeError
from dualtune.models.dataset import Dataset
from dualtune.models.pipeline import PreprocessorKind, PreprocessorSpec
from dualtune.preprocess.polynomial import output_width
from dualtune.preprocess.power import fit_power_transformer
from dualtune.preprocess.quantile import fit_quantile_transformer
from dualtune.preprocess.registry import fit, resample, transform, transform_dataset
from dualtune.preprocess.scalers import (
    fit_binarizer,
    fit_max_abs_scaler,
    fit_min_max_scaler,
    fit_normalizer,
    fit_robust_scaler,
    fit_standard_scaler,
)
from dualtune.preprocess.smote import smote

COLUMN = np.array([[1.0], [3.0]])


def test_standard_scaler_two_points():
    ft = fit_standard_scaler(COLUMN)
    assert ft.estimator.mean_[0] == pytest.approx(2.0)
    assert ft.estimator.scale_[0] == pytest.approx(1.0)
    np.testing.assert_allclose(ft.transform(COLUMN).ravel(), [-1.0, 1.0])


def test_min_max_scaler_learns_range():
    ft = fit_min_max_scaler(COLUMN)
    assert ft.estimator.data_min_[0] == pytest.approx(1.0)
    assert ft.estimator.data_range_[0] == pytest.approx(2.0)
    np.testing.assert_allclose(ft.transform([[2.0]]).ravel(), [0.5])


def test_min_max_scaler_target_interval():
    ft = fit_min_max_scaler(COLUMN, min=-2.0, max=2.0)
    np.testing.assert_allclose(ft.transform(COLUMN).ravel(), [-2.0, 2.0])
    with pytest.raises(ArgumentError):
        fit_min_max_scaler(COLUMN, min=1.0, max=1.0)


def test_robust_scaler_quartiles():
    X = np.arange(5, dtype=float).reshape(-1, 1)
    ft = fit_robust_scaler(X, q_min=25, q_max=75)
    assert ft.estimator.center_[0] == pytest.approx(2.0)
    assert ft.estimator.scale_[0] == pytest.approx(2.0)


def test_constant_column_maps_to_zero():
    X = np.array([[4.0, 1.0], [4.0, 2.0], [4.0, 3.0]])
    out = fit_standard_scaler(X).transform(X)
    np.testing.assert_allclose(out[:, 0], 0.0)
    assert np.isfinite(out).all()


def test_scalers_use_training_statistics_only():
    ft = fit_standard_scaler(COLUMN)
    np.testing.assert_allclose(ft.transform([[5.0]]).ravel(), [3.0])


@pytest.mark.parametrize(
    "norm, expected",
    [("l2", [0.6, 0.8]), ("l1", [3 / 7, 4 / 7]), ("max", [0.75, 1.0])],
)
def test_normalizer_rows(norm, expected):
    ft = fit_normalizer(np.zeros((1, 2)), norm=norm)
    np.testing.assert_allclose(ft.transform([[3.0, 4.0]]).ravel(), expected)
    np.testing.assert_allclose(ft.transform([[0.0, 0.0]]).ravel(), [0.0, 0.0])


def test_binarizer():
    ft = fit_binarizer(np.zeros((1, 2)), threshold=0.0)
    np.testing.assert_array_equal(ft.transform([[0.0, 2.0]]), [[0.0, 1.0]])


def test_polynomial_degree_two():
    spec = PreprocessorSpec(kind=PreprocessorKind.POLYNOMIAL_FEATURES)
    ft = fit(spec, np.array([[2.0, 3.0]]))
    np.testing.assert_allclose(transform(ft, [[2.0, 3.0]]).ravel(), [1, 2, 3, 4, 6, 9])
    assert ft.feature_names_out(("a", "b")) == ("1", "a", "b", "a*a", "a*b", "b*b")


def test_polynomial_interaction_only_width():
    assert output_width(3, 2, include_bias=False, interaction_only=True) == 6
    assert output_width(3, 3, include_bias=True, interaction_only=False) == 20


def test_box_cox_rejects_non_positive():
    X = np.array([[1.0, 2.0], [2.0, 0.0], [3.0, 1.0]])
    with pytest.raises(DomainError, match="column 1"):
        fit_power_transformer(X, method="box-cox")


def test_yeo_johnson_standardizes():
    rng = np.random.default_rng(0)
    X = rng.exponential(2.0, size=(200, 3))
    out = fit_power_transformer(X).transform(X)
    np.testing.assert_allclose(out.mean(axis=0), 0.0, atol=1e-8)
    np.testing.assert_allclose(out.std(axis=0), 1.0, atol=1e-8)


def test_quantile_clamps_and_warns(caplog):
    X = np.arange(5, dtype=float).reshape(-1, 1)
    with caplog.at_level(logging.WARNING, logger="dualtune.preprocess.quantile"):
        ft = fit_quantile_transformer(X, n_quantiles=1000)
    assert "exceeds" in caplog.text
    assert ft.quantiles.shape == (5, 1)
    np.testing.assert_allclose(ft.transform(X).ravel(), [0.0, 0.25, 0.5, 0.75, 1.0])


def test_max_abs_scaler():
    X = np.array([[-4.0, 1.0], [2.0, 0.0], [1.0, 0.0]])
    ft = fit_max_abs_scaler(X)
    np.testing.assert_allclose(ft.transform(X), [[-1.0, 1.0], [0.5, 0.0], [0.25, 0.0]])
    np.testing.assert_allclose(ft.transform([[8.0, 3.0]]), [[2.0, 3.0]])


@pytest.fixture
def random_matrix():
    rng = np.random.default_rng(11)
    return rng.gamma(1.5, 3.0, size=(120, 6)) * rng.integers(0, 2, size=(120, 6))


def test_standard_scaler_invariants(random_matrix):
    out = fit_standard_scaler(random_matrix).transform(random_matrix)
    np.testing.assert_allclose(out.mean(axis=0), 0.0, atol=1e-9)
    np.testing.assert_allclose(out.std(axis=0), 1.0, atol=1e-9)


def test_min_max_output_stays_in_target(random_matrix):
    out = fit_min_max_scaler(random_matrix, min=-3.0, max=2.5).transform(random_matrix)
    assert out.min() >= -3.0 - 1e-12
    assert out.max() <= 2.5 + 1e-12
    np.testing.assert_allclose(out.min(axis=0), -3.0)
    np.testing.assert_allclose(out.max(axis=0), 2.5)


@pytest.mark.parametrize("norm", ["l1", "l2", "max"])
def test_normalizer_unit_rows(random_matrix, norm):
    out = fit_normalizer(random_matrix, norm=norm).transform(random_matrix)
    ord_ = {"l1": 1, "l2": 2, "max": np.inf}[norm]
    nonzero = np.abs(random_matrix).sum(axis=1) > 0
    np.testing.assert_allclose(np.linalg.norm(out[nonzero], ord=ord_, axis=1), 1.0)
    np.testing.assert_array_equal(out[~nonzero], 0.0)


def test_quantile_uniform_invariants(random_matrix):
    ft = fit_quantile_transformer(random_matrix, n_quantiles=50)
    out = ft.transform(random_matrix)
    assert out.min() >= 0.0
    assert out.max() <= 1.0
    for j in range(random_matrix.shape[1]):
        order = np.argsort(random_matrix[:, j], kind="stable")
        assert np.all(np.diff(out[order, j]) >= -1e-12)


def test_quantile_ignores_implicit_zeros():
    X = np.array([[0.0], [1.0], [2.0], [0.0], [3.0]])
    ft = fit_quantile_transformer(X, n_quantiles=3, ignore_implicit_zeros=True)
    np.testing.assert_allclose(ft.quantiles.ravel(), [1.0, 2.0, 3.0])
    np.testing.assert_allclose(ft.transform(X).ravel(), [0.0, 0.0, 0.5, 0.0, 1.0])


def test_quantile_normal_output_is_monotone():
    rng = np.random.default_rng(3)
    X = rng.gamma(2.0, size=(300, 2))
    ft = fit_quantile_transformer(X, n_quantiles=100, output_distribution="normal")
    out = ft.transform(X)
    order = np.argsort(X[:, 0])
    assert np.all(np.diff(out[order, 0]) >= -1e-12)
    assert np.isfinite(out).all()


def test_width_mismatch_is_shape_error():
    ft = fit_standard_scaler(np.ones((3, 2)))
    with pytest.raises(ShapeError):
        ft.transform(np.ones((2, 3)))


def test_empty_matrix_transforms_to_empty():
    ft = fit_standard_scaler(np.ones((3, 2)))
    assert ft.transform(np.zeros((0, 2))).shape == (0, 2)


def test_fit_rejects_empty_training_matrix():
    with pytest.raises(ArgumentError):
        fit(PreprocessorSpec(kind=PreprocessorKind.STANDARD_SCALER), np.zeros((0, 2)))


def test_none_and_smote_fit_to_identity():
    X = np.array([[1.0, 2.0]])
    for kind in (PreprocessorKind.NONE, PreprocessorKind.SMOTE):
        np.testing.assert_array_equal(transform(fit(PreprocessorSpec(kind=kind), X), X), X)


def _imbalanced(n_min: int, n_maj: int, seed: int = 0) -> Dataset:
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(5, 1, (n_min, 2)), rng.normal(0, 1, (n_maj, 2))])
    y = [1] * n_min + [0] * n_maj
    return Dataset(
        ids=tuple(f"r{i}" for i in range(len(y))), X=X, y=y, feature_names=("a", "b")
    )


def test_smote_doubles_minority():
    ds = _imbalanced(10, 90)
    out = smote(ds, k=5, m=100, seed=1)
    assert out.sbr_count == 20
    assert out.nsbr_count == 90
    assert out.ids[:100] == ds.ids
    assert out.ids[100] == "smote-0"


def test_smote_floor_count():
    out = smote(_imbalanced(22, 60), k=5, m=50, seed=0)
    assert len(out) == 82 + 11


def test_smote_segment_geometry():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [5.0, 0.0], [5.0, 1.0], [6.0, 0.0], [6.0, 1.0]])
    ds = Dataset(ids=tuple("abcdef"), X=X, y=[1, 1, 0, 0, 0, 0], feature_names=("a", "b"))
    synth = smote(ds, k=1, m=400, r=2, seed=5).X[6:]
    assert synth.shape == (8, 2)
    np.testing.assert_allclose(synth[:, 0], synth[:, 1])
    assert ((synth[:, 0] >= 0) & (synth[:, 0] <= 1)).all()


def test_smote_points_lie_between_minority_pairs():
    ds = _imbalanced(8, 30, seed=2)
    minority = ds.X[ds.y == 1]
    synth = smote(ds, k=3, m=200, r=1, seed=3).X[len(ds):]
    for x in synth:
        residual = min(
            np.linalg.norm(a - x) + np.linalg.norm(x - b) - np.linalg.norm(a - b)
            for a, b in permutations(minority, 2)
        )
        assert residual < 1e-9


def test_smote_needs_two_minority_records():
    with pytest.raises(OversamplingError):
        smote(_imbalanced(1, 10), k=1, m=100)


def test_smote_clamps_k(caplog):
    with caplog.at_level(logging.WARNING, logger="dualtune.preprocess.smote"):
        out = smote(_imbalanced(3, 20), k=10, m=100, seed=0)
    assert "exceeds" in caplog.text
    assert out.sbr_count == 6


def test_smote_is_seeded():
    ds = _imbalanced(10, 40)
    assert smote(ds, m=150, seed=4).equals(smote(ds, m=150, seed=4))


def test_resample_only_for_smote():
    ds = _imbalanced(5, 20)
    spec = PreprocessorSpec(kind=PreprocessorKind.STANDARD_SCALER)
    assert resample(spec, ds, seed=0) is ds
    smoted = resample(PreprocessorSpec(kind=PreprocessorKind.SMOTE), ds, seed=0)
    assert len(smoted) == 25 + 2


def test_transform_dataset_renames_expanded_columns():
    ds = _imbalanced(2, 2)
    spec = PreprocessorSpec(
        kind=PreprocessorKind.POLYNOMIAL_FEATURES, params={"include_bias": False}
    )
    out = transform_dataset(fit(spec, ds.X), ds)
    assert out.feature_names == ("a", "b", "a*a", "a*b", "b*b")
    assert out.ids == ds.ids
