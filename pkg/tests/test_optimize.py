import logging

import numpy as np
import pytest

from dualtune.data.folds import split_folds
from dualtune.errors import ArgumentError, ConfigError, ShapeError, ValidationError
from dualtune.learners.bayes import train_bayes
from dualtune.learners.registry import train as train_learner
from dualtune.metrics.confusion import evaluate
from dualtune.models.config import DeConfig, Goal, SwiftConfig
from dualtune.models.dataset import Dataset
from dualtune.models.pipeline import LearnerKind, PipelineSpec
from dualtune.models.space import ParamRange, ParamSpace, ParamType, default_space, item_for
from dualtune.optimize.de import de_optimize, differential_evolution, mutate
from dualtune.optimize.evaluate import (
    cross_validate,
    evaluate_pipeline,
    final_fit_and_test,
)
from dualtune.optimize.objective import CachingObjective, PipelineObjective
from dualtune.optimize.swift import (
    REFINE_STAGE,
    refine_range,
    replay_weights,
    sampling_mass,
    swift_optimize,
    weight_delta,
)
from dualtune.preprocess.registry import fit, resample, transform_dataset
from dualtune.utils.seeding import derive_seed


def _real(name, lo, hi):
    return ParamRange(name=name, type=ParamType.REAL, lo=lo, hi=hi, default=lo)


def test_mutation_arithmetic():
    out = mutate(np.array([1.0]), np.array([3.0]), np.array([1.0]), 0.8)
    assert out[0] == pytest.approx(2.6)


def test_degenerate_range_stays_put():
    ranges = [ParamRange(name="x", type=ParamType.REAL, lo=2.0, hi=2.0, default=2.0)]
    run = differential_evolution(ranges, fn=lambda p: -p["x"], cfg=DeConfig(np=5, iters=3))
    assert {p["x"] for p in run.params} == {2.0}
    assert run.best_params == {"x": 2.0}


def test_de_one_dimensional_parabola():
    run = differential_evolution(
        [_real("x", -5.0, 5.0)], fn=lambda p: -p["x"] ** 2, cfg=DeConfig(np=20, iters=10, seed=7)
    )
    assert abs(run.best_params["x"]) < 0.1
    assert len(run.values) == 20 * 11


def test_de_sphere_acceptance():
    ranges = [_real("x", -5.0, 5.0), _real("y", -5.0, 5.0)]

    def sphere(p):
        return -(p["x"] ** 2 + p["y"] ** 2)

    solved = 0
    for seed in range(20):
        cfg = DeConfig(np=20, iters=10, seed=seed, strategy="best1", updating="immediate")
        run = differential_evolution(ranges, fn=sphere, cfg=cfg)
        best = run.running_best()
        assert all(b2 >= b1 for b1, b2 in zip(best, best[1:]))
        solved += -run.best_value < 0.01
    assert solved >= 18


@pytest.mark.parametrize("updating", ["deferred", "immediate"])
@pytest.mark.parametrize("strategy", ["rand1", "best1"])
def test_de_incumbent_never_drops(strategy, updating):
    ranges = [_real("x", -5.0, 5.0), _real("y", -5.0, 5.0)]
    cfg = DeConfig(np=8, iters=5, seed=3, strategy=strategy, updating=updating)
    run = differential_evolution(ranges, fn=lambda p: -abs(p["x"] - 1) - abs(p["y"]), cfg=cfg)
    best = run.running_best()
    assert all(b2 >= b1 for b1, b2 in zip(best, best[1:]))
    assert run.best_value == max(run.values)
    assert len(run.population) == 8


def test_de_is_seeded():
    ranges = [_real("x", -5.0, 5.0)]
    cfg = DeConfig(np=6, iters=4, seed=11)
    a = differential_evolution(ranges, fn=lambda p: -p["x"] ** 2, cfg=cfg)
    b = differential_evolution(ranges, fn=lambda p: -p["x"] ** 2, cfg=cfg)
    assert a.params == b.params


def test_de_population_too_small():
    with pytest.raises(ConfigError):
        differential_evolution([_real("x", 0, 1)], fn=lambda p: p["x"], population=3)


def test_de_needs_an_objective():
    with pytest.raises(ArgumentError):
        differential_evolution([_real("x", 0, 1)])


def test_de_population_stays_legal():
    item = item_for("RF")
    space = ParamSpace(items=[item])
    cfg = DeConfig(iters=2, seed=4)

    def objective(spec):
        p = spec.learner.params
        return p["n_estimators"] / 150 - p["min_samples_leaf"] / 20

    trace = de_optimize(space, objective, cfg, PipelineSpec.of("None", "RF"))
    assert len(trace) == 60 * 3
    assert trace.evaluations[0].stage == "init"
    assert trace.evaluations[-1].stage == "gen-2"
    for e in trace.evaluations:
        for r in item.tunable:
            value = e.spec.learner.params[r.name]
            assert r.contains(value)
            if r.type == ParamType.INT:
                assert isinstance(value, int)
    assert trace.best_value == max(trace.values)


def test_de_optimize_keeps_base_slot():
    trace = de_optimize(
        ParamSpace(items=[item_for("KNN")]),
        lambda spec: -abs(spec.learner.params["n_neighbors"] - 3),
        DeConfig(np=20, iters=5, seed=1),
        PipelineSpec.of("StandardScaler", "NB"),
    )
    assert all(e.spec.preprocessor.kind.value == "StandardScaler" for e in trace.evaluations)
    assert trace.best_spec.learner.params["n_neighbors"] == 3


def test_de_optimize_tunes_one_item():
    with pytest.raises(ArgumentError):
        de_optimize(default_space().restrict(["RF", "NB"]), lambda s: 0.0)


def _two_learner_objective(spec):
    return 0.9 if spec.learner.kind == LearnerKind.RF else 0.1


def test_weight_delta_rules():
    assert weight_delta(0.5, [], 0.2) == 0
    assert weight_delta(0.9, [0.1, 0.9], 0.2) == 1
    assert weight_delta(0.1, [0.9, 0.15], 0.2) == -1
    assert weight_delta(0.1, [0.9], 0.2) == 0


def test_sampling_mass_keeps_every_item_reachable():
    np.testing.assert_allclose(sampling_mass([-3.0, 0.0, 2.0]), [0.2, 0.2, 0.6])


@pytest.mark.parametrize("seed", range(20))
def test_swift_prefers_dominant_learner(seed):
    space = default_space().restrict(["RF", "NB", "None"])
    cfg = SwiftConfig(epsilon=0.2, n1=20, n2=5, seed=seed)
    trace = swift_optimize(space, _two_learner_objective, cfg)
    assert trace.weights["RF"] > trace.weights["NB"]
    assert replay_weights(trace, 0.2, ["RF", "NB", "None"]) == trace.weights
    refined = [e for e in trace.evaluations if e.stage == REFINE_STAGE]
    assert refined and all(e.spec.learner.kind == LearnerKind.RF for e in refined)
    assert all(key.startswith("RF.") for key in trace.ranges)


def test_swift_budget_and_determinism():
    space = default_space().restrict(["LR", "KNN", "None", "MinMaxScaler"])
    cfg = SwiftConfig(epsilon=0.05, n1=7, n2=9, seed=2)

    def objective(spec):
        return 0.5 if spec.preprocessor.kind.value == "None" else 0.2

    a = swift_optimize(space, objective, cfg)
    b = swift_optimize(space, objective, cfg)
    assert len(a) == 16
    assert [e.spec.key() for e in a.evaluations] == [e.spec.key() for e in b.evaluations]
    assert a.weights == b.weights


def test_swift_constant_objective_decrements():
    space = default_space().restrict(["NB", "None"])
    trace = swift_optimize(space, lambda s: 0.5, SwiftConfig(epsilon=0.05, n1=5, n2=2))
    assert trace.weights == {"NB": -4.0, "None": -4.0}


def test_swift_single_pair_single_round():
    space = default_space().restrict(["NB", "None"])
    trace = swift_optimize(space, lambda s: 0.3, SwiftConfig(n1=1, n2=3))
    assert trace.best_index == 0
    assert len(trace) == 4


def test_swift_ranges_contain_incumbent():
    space = default_space().restrict(["LR", "None"])

    def objective(spec):
        return -(spec.learner.params["C"] - 7.0) ** 2

    trace = swift_optimize(space, objective, SwiftConfig(n1=3, n2=30, seed=5))
    best = trace.best_spec.learner.params
    for name in ("C", "max_iter"):
        lo, hi = trace.ranges[f"LR.{name}"]
        assert lo <= best[name] <= hi
    assert trace.best_value == max(trace.values)


def test_refine_range_moves_far_endpoint():
    assert refine_range(0.0, 10.0, 8.0) == (4.0, 10.0)
    assert refine_range(0.0, 10.0, 2.0) == (0.0, 6.0)


def test_refine_range_collapses_onto_outside_draw():
    assert refine_range(3.4, 3.6, 3.0) == (3.0, 3.0)


@pytest.mark.parametrize("seed", range(5))
def test_swift_ranges_never_widen(seed):
    space = default_space().restrict(["KNN", "RobustScaler"])

    def objective(spec):
        p = spec.learner.params
        q = spec.preprocessor.params
        return -abs(p["n_neighbors"] - 3) - abs(q["q_min"] - 30.0) / 10.0

    trace = swift_optimize(space, objective, SwiftConfig(n1=2, n2=60, seed=seed))
    history = trace.range_history
    assert len(history) >= 2
    assert history[-1] == trace.ranges
    for before, after in zip(history, history[1:]):
        for key, (lo, hi) in after.items():
            assert hi - lo <= before[key][1] - before[key][0]
    best = trace.best_spec
    for key, (lo, hi) in trace.ranges.items():
        item, name = key.split(".")
        params = best.learner.params if item == "KNN" else best.preprocessor.params
        assert lo <= params[name] <= hi



def test_swift_needs_learner_and_preprocessor():
    with pytest.raises(ConfigError):
        swift_optimize(default_space().restrict(["RF"]), lambda s: 0.0)


def test_swift_warns_when_n1_is_small(caplog):
    with caplog.at_level(logging.WARNING, logger="dualtune.optimize.swift"):
        swift_optimize(default_space(), lambda s: 0.0, SwiftConfig(n1=2, n2=1))
    assert "never be tried" in caplog.text


def test_separable_pipeline_scores_perfectly(separable_train):
    folds = split_folds(separable_train, 4, 0)
    spec = PipelineSpec.of("None", "NB")
    assert evaluate_pipeline(spec, separable_train, folds, "g", 0) == pytest.approx(1.0)
    assert evaluate_pipeline(spec, separable_train, folds, "pf", 0) == 0.0


def test_cross_validation_matches_hand_rolled_loop(separable_factory):
    ds = separable_factory(10, 20, seed=9)
    rng = np.random.default_rng(4)
    ds = ds.with_features(ds.X + rng.normal(0, 3.0, ds.X.shape))
    folds = split_folds(ds, 5, 13)
    expected = []
    for b in range(5):
        fit_idx = np.flatnonzero(folds.fold_of != b)
        val_idx = np.flatnonzero(folds.fold_of == b)
        model = train_bayes(ds.X[fit_idx], ds.y[fit_idx], seed=0)
        pred = (model.predict_score(ds.X[val_idx]) > 0.5).astype(int)
        y = ds.y[val_idx]
        pd_ = np.sum((pred == 1) & (y == 1)) / np.sum(y == 1)
        pf_ = np.sum((pred == 1) & (y == 0)) / np.sum(y == 0)
        expected.append(0.0 if pd_ + 1 - pf_ == 0 else 2 * pd_ * (1 - pf_) / (pd_ + 1 - pf_))
    got = evaluate_pipeline(PipelineSpec.of("None", "NB"), ds, folds, "g", 13)
    assert got == pytest.approx(float(np.mean(expected)), abs=1e-12)


@pytest.mark.parametrize("goal", ["pd", "g"])
def test_cross_validation_flags_folds_without_positives(separable_factory, goal):
    ds = separable_factory(2, 10, seed=1)
    folds = split_folds(ds, 3, 0)
    cv = cross_validate(PipelineSpec.of("None", "NB"), ds, folds, goal, 0)
    empty = [r for r in cv.folds if r.confusion.positives == 0]
    assert empty
    assert {"pd", "prec", "f"} <= set(cv.flags)
    assert all(r.value(goal) == 0.0 for r in empty)


def test_unknown_goal_is_rejected(separable_factory):
    ds = separable_factory(2, 10, seed=1)
    with pytest.raises(ArgumentError):
        cross_validate(PipelineSpec(), ds, split_folds(ds, 3, 0), "auc", 0)


def test_final_fit_on_training_set_with_one_neighbour(separable_train):
    spec = PipelineSpec.of("None", "KNN", learner_params={"n_neighbors": 1})
    result, ranked = final_fit_and_test(spec, separable_train, separable_train, seed=0)
    assert result.pd == 1.0
    assert result.pf == 0.0
    assert len(ranked) == len(separable_train)
    assert ranked.labels[: separable_train.sbr_count].all()


def test_final_fit_matches_module_composition(separable_train, separable_test):
    spec = PipelineSpec.of("SMOTE", "LR", preprocessor_params={"m": 100})
    seed = 21
    result, _ = final_fit_and_test(spec, separable_train, separable_test, seed)

    inner = derive_seed(seed, "final")
    ft = fit(spec.preprocessor, separable_train.X, seed=inner)
    rows = resample(spec.preprocessor, transform_dataset(ft, separable_train), inner)
    model = train_learner(spec.learner, rows, inner)
    expected = evaluate(separable_test.y, model.predict_score(ft.transform(separable_test.X)))
    assert result == expected


def test_final_fit_input_checks(separable_train):
    empty = Dataset(ids=(), X=np.zeros((0, 3)), y=[], feature_names=("t0", "t1", "t2"))
    with pytest.raises(ValidationError):
        final_fit_and_test(PipelineSpec(), separable_train, empty)
    narrow = separable_train.with_features(separable_train.X[:, :2])
    with pytest.raises(ShapeError):
        final_fit_and_test(PipelineSpec(), separable_train, narrow)


def test_pipeline_objective_orients_goal(separable_train):
    folds = split_folds(separable_train, 4, 0)
    pf = PipelineObjective(separable_train, folds, Goal.PF, 0)
    assert pf(PipelineSpec.of("None", "NB")).value == 0.0
    g = PipelineObjective(separable_train, folds, Goal.G, 0)
    bad = g(PipelineSpec.of("PowerTransformer", "NB", preprocessor_params={"method": "box-cox"}))
    assert bad.value == 0.0
    assert bad.flags == ("invalid",)


def test_caching_objective_counts_hits():
    calls = []

    def objective(spec):
        calls.append(spec.key())
        return 0.4

    cache = CachingObjective(objective)
    a = PipelineSpec.of("None", "NB")
    b = PipelineSpec.of("None", "KNN")
    first = cache.batch([a, b, a])
    assert [s.cached for s in first] == [False, False, True]
    assert cache(b).cached
    assert len(calls) == 2
    assert len(cache) == 2
