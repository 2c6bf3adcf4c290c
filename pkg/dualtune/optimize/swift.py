"""SWIFT: ε-dominance item ranking followed by numeric range refinement.

Stage 1 gives every learner and pre-processor a weight of 0. Stage 2 samples
one learner and one pre-processor (mass ``max(w, 0) + 1``), draws their
parameters uniformly and scores the pipeline. The result moves both weights:

* +1 when it beats some earlier result by more than ε,
* otherwise -1 when it lies within ε of some earlier result,
* otherwise 0 (it trails every earlier result by more than ε).

Stage 3 freezes the weights and keeps only the top-weight learner and
pre-processor. Whenever a sampled pipeline improves the incumbent, each
numeric parameter's range shrinks: the endpoint farther from the winning
value b moves to the midpoint of b and that endpoint.
"""

from __future__ import annotations

import logging
from typing import Iterable, Optional

import numpy as np

from ..errors import ConfigError
from ..models.config import Goal, SwiftConfig
from ..models.dataset import Dataset, FoldAssignment
from ..models.pipeline import LearnerSpec, PipelineSpec, PreprocessorSpec
from ..models.results import Evaluation, OptimizerTrace
from ..models.space import ParamSpace, ParamValue, SpaceItem
from ..utils.seeding import make_rng
from .objective import CachingObjective, Objective, PipelineObjective

logger = logging.getLogger(__name__)

RANK_STAGE = "rank"
REFINE_STAGE = "refine"


def weight_delta(value: float, priors: Iterable[float], epsilon: float) -> int:
    """ε-dominance weight change for one new result against all earlier ones."""
    priors = list(priors)
    if not priors:
        return 0
    if any(value > p + epsilon for p in priors):
        return 1
    if any(abs(value - p) <= epsilon for p in priors):
        return -1
    return 0


def sampling_mass(weights: list[float]) -> np.ndarray:
    mass = np.maximum(np.asarray(weights, dtype=float), 0.0) + 1.0
    return mass / mass.sum()


def _pick(
    items: list[SpaceItem], weights: dict[str, float], rng: np.random.Generator
) -> SpaceItem:
    p = sampling_mass([weights[i.name] for i in items])
    return items[int(rng.choice(len(items), p=p))]


def _sample_params(
    item: SpaceItem,
    rng: np.random.Generator,
    ranges: Optional[dict[str, tuple[float, float]]] = None,
) -> dict[str, ParamValue]:
    params: dict[str, ParamValue] = {}
    for r in item.tunable:
        key = f"{item.name}.{r.name}"
        if ranges is not None and key in ranges:
            lo, hi = ranges[key]
            params[r.name] = r.sample(rng, lo, hi)
        else:
            params[r.name] = r.sample(rng)
    return params


def _pipeline(
    prep: SpaceItem, prep_params: dict, learner: SpaceItem, learner_params: dict
) -> PipelineSpec:
    return PipelineSpec(
        preprocessor=PreprocessorSpec(kind=prep.name, params=prep_params),
        learner=LearnerSpec(kind=learner.name, params=learner_params),
    )


def _top(items: list[SpaceItem], weights: dict[str, float]) -> SpaceItem:
    # max() keeps the first of equal weights, i.e. menu order
    return max(items, key=lambda i: weights[i.name])


def refine_range(lo: float, hi: float, b: float) -> tuple[float, float]:
    """Move the endpoint farther from b to the midpoint between them.

    The result contains b and is never wider than (lo, hi). An integer draw
    that fell outside a range holding no integer collapses the range onto it.
    """
    if not lo <= b <= hi:
        return b, b
    if b - lo >= hi - b:
        return (b + lo) / 2.0, hi
    return lo, (b + hi) / 2.0


def swift_optimize(
    space: ParamSpace,
    objective: Objective,
    cfg: Optional[SwiftConfig] = None,
) -> OptimizerTrace:
    cfg = cfg or SwiftConfig()
    learners = space.learners
    preps = space.preprocessors
    if not learners or not preps:
        raise ConfigError("SWIFT needs at least one learner and one pre-processor")
    n_items = len(learners) + len(preps)
    if cfg.n1 < n_items:
        logger.warning(
            "n1=%d is smaller than the %d menu items; some items may never be tried",
            cfg.n1, n_items,
        )

    rng = make_rng(cfg.seed, "swift")
    score = CachingObjective(objective)
    weights: dict[str, float] = {i.name: 0.0 for i in space.items}
    trace = OptimizerTrace()

    # Item ranking
    for _ in range(cfg.n1):
        learner = _pick(learners, weights, rng)
        prep = _pick(preps, weights, rng)
        spec = _pipeline(prep, _sample_params(prep, rng), learner, _sample_params(learner, rng))
        s = score(spec)
        delta = weight_delta(s.value, trace.values, cfg.epsilon)
        weights[learner.name] += delta
        weights[prep.name] += delta
        trace.log(
            Evaluation(
                spec=spec, value=s.value, stage=RANK_STAGE, cached=s.cached, flags=s.flags
            )
        )
    logger.info("SWIFT weights after ranking: %s", weights)

    # Numeric refinement on the best pair; weights stay frozen
    learner = _top(learners, weights)
    prep = _top(preps, weights)
    ranges: dict[str, tuple[float, float]] = {}
    for item in (prep, learner):
        for r in item.tunable:
            if r.is_numeric:
                ranges[f"{item.name}.{r.name}"] = (float(r.lo), float(r.hi))
    logger.info("SWIFT refining %s + %s", prep.name, learner.name)
    trace.range_history.append(dict(ranges))

    for _ in range(cfg.n2):
        prep_params = _sample_params(prep, rng, ranges)
        learner_params = _sample_params(learner, rng, ranges)
        spec = _pipeline(prep, prep_params, learner, learner_params)
        s = score(spec)
        improved = trace.log(
            Evaluation(
                spec=spec, value=s.value, stage=REFINE_STAGE, cached=s.cached, flags=s.flags
            )
        )
        if not improved:
            continue
        for item, params in ((prep, prep_params), (learner, learner_params)):
            for name, b in params.items():
                key = f"{item.name}.{name}"
                if key in ranges:
                    ranges[key] = refine_range(*ranges[key], float(b))
        logger.debug("SWIFT incumbent %.4f, ranges %s", s.value, ranges)
        trace.range_history.append(dict(ranges))

    trace.weights = dict(weights)
    trace.ranges = ranges
    return trace


def replay_weights(
    trace: OptimizerTrace, epsilon: float, items: Optional[Iterable[str]] = None
) -> dict[str, float]:
    """Recompute the ranking-stage weights from a trace's logged values."""
    names = list(items) if items is not None else list(trace.weights)
    weights = {name: 0.0 for name in names}
    priors: list[float] = []
    for e in trace.evaluations:
        if e.stage != RANK_STAGE:
            continue
        delta = weight_delta(e.value, priors, epsilon)
        for name in (e.spec.learner.kind.value, e.spec.preprocessor.kind.value):
            weights[name] = weights.get(name, 0.0) + delta
        priors.append(e.value)
    return weights


def swift_tune(
    space: ParamSpace,
    train: Dataset,
    folds: FoldAssignment,
    cfg: Optional[SwiftConfig] = None,
    goal: Goal = Goal.G,
    seed: int = 0,
) -> OptimizerTrace:
    """SWIFT over cross-validated goal values on ``train``."""
    return swift_optimize(space, PipelineObjective(train, folds, goal, seed), cfg)
