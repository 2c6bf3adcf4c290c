"""Differential evolution over one item's hyperparameters (DE3 / DE10)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import ArgumentError, ConfigError
from ..models.config import DeConfig, DeStrategy, DeUpdating
from ..models.pipeline import LearnerSpec, PipelineSpec, PreprocessorSpec
from ..models.results import Evaluation, OptimizerTrace
from ..models.space import ItemKind, ParamRange, ParamSpace, ParamValue, SpaceItem
from ..utils.seeding import make_rng
from .objective import CachingObjective, Objective, Scored

logger = logging.getLogger(__name__)

Params = dict[str, ParamValue]
BatchFn = Callable[[list[Params]], list[float]]


def mutate(a: np.ndarray, b: np.ndarray, c: np.ndarray, f: float) -> np.ndarray:
    """y = a + f·(b - c)."""
    return a + f * (b - c)


@dataclass
class DeRun:
    """Every evaluation in order, plus the final population."""

    params: list[Params] = field(default_factory=list)
    values: list[float] = field(default_factory=list)
    population: list[Params] = field(default_factory=list)
    population_values: list[float] = field(default_factory=list)

    @property
    def best_index(self) -> int:
        # First occurrence of the maximum: later ties never replace the incumbent
        return int(np.argmax(self.values))

    @property
    def best_params(self) -> Params:
        return self.params[self.best_index]

    @property
    def best_value(self) -> float:
        return self.values[self.best_index]

    def running_best(self) -> list[float]:
        return list(np.maximum.accumulate(self.values))


def _decode(ranges: list[ParamRange], x: np.ndarray) -> Params:
    return {r.name: r.decode(v) for r, v in zip(ranges, x)}


def _snap(ranges: list[ParamRange], x: np.ndarray) -> np.ndarray:
    return np.array([r.snap(v) for r, v in zip(ranges, x)], dtype=float)


def differential_evolution(
    ranges: list[ParamRange],
    fn: Optional[Callable[[Params], float]] = None,
    cfg: Optional[DeConfig] = None,
    population: Optional[int] = None,
    batch_fn: Optional[BatchFn] = None,
) -> DeRun:
    """Maximise ``fn`` over the box given by ``ranges``.

    By default generations are synchronous: all mutants of a generation are
    built from the previous population, then scored together. With
    ``updating="immediate"`` each mutant is scored on its own and may replace
    its parent before the next mutant is built. A mutant replaces its parent
    when it scores at least as well. ``strategy="best1"`` uses the current
    best individual as the base vector instead of a random one.

    Integer, boolean and categorical components move in a continuous
    embedding and are snapped to legal values before scoring.
    """
    cfg = cfg or DeConfig()
    np_ = population or cfg.population
    if np_ is None:
        np_ = max(4, 10 * len(ranges))
    if np_ < 4:
        raise ConfigError(f"DE population must be at least 4, got {np_}")
    if batch_fn is None:
        if fn is None:
            raise ArgumentError("differential_evolution needs fn or batch_fn")

        def batch_fn(batch: list[Params]) -> list[float]:
            return [float(fn(p)) for p in batch]

    rng = make_rng(cfg.seed, "de")
    d = len(ranges)
    lo = np.array([r.bounds[0] for r in ranges], dtype=float)
    hi = np.array([r.bounds[1] for r in ranges], dtype=float)

    pop = np.array([_snap(ranges, rng.uniform(lo, hi)) for _ in range(np_)]).reshape(np_, d)
    pop_params = [_decode(ranges, x) for x in pop]
    pop_values = np.array(batch_fn(pop_params), dtype=float)
    run = DeRun(params=list(pop_params), values=list(pop_values))

    def trial_for(i: int) -> np.ndarray:
        others = np.delete(np.arange(np_), i)
        if cfg.strategy == DeStrategy.BEST1:
            b, c = pop[rng.choice(others, size=2, replace=False)]
            a = pop[int(np.argmax(pop_values))]
        else:
            a, b, c = pop[rng.choice(others, size=3, replace=False)]
        if not d:
            return pop[i].copy()
        cross = rng.random(d) < cfg.cr
        cross[rng.integers(d)] = True
        y = np.clip(mutate(a, b, c, cfg.f), lo, hi)
        return _snap(ranges, np.where(cross, y, pop[i]))

    for gen in range(cfg.iters):
        if cfg.updating == DeUpdating.IMMEDIATE:
            replaced = 0
            for i in range(np_):
                x = trial_for(i)
                p = _decode(ranges, x)
                v = float(batch_fn([p])[0])
                run.params.append(p)
                run.values.append(v)
                if v >= pop_values[i]:
                    pop[i], pop_values[i], pop_params[i] = x, v, p
                    replaced += 1
        else:
            trials = np.array([trial_for(i) for i in range(np_)]).reshape(np_, d)
            trial_params = [_decode(ranges, x) for x in trials]
            trial_values = np.array(batch_fn(trial_params), dtype=float)
            run.params.extend(trial_params)
            run.values.extend(trial_values)

            better = trial_values >= pop_values
            pop[better] = trials[better]
            pop_values[better] = trial_values[better]
            pop_params = [trial_params[i] if better[i] else pop_params[i] for i in range(np_)]
            replaced = int(better.sum())
        logger.debug(
            "DE generation %d: best %.4f, %d replaced", gen + 1, max(run.values), replaced
        )

    run.population = pop_params
    run.population_values = list(pop_values)
    return run


def _spec_for(item: SpaceItem, params: Params, base: PipelineSpec) -> PipelineSpec:
    full = {**item.defaults(), **params}
    if item.kind == ItemKind.LEARNER:
        return PipelineSpec(
            preprocessor=base.preprocessor, learner=LearnerSpec(kind=item.name, params=full)
        )
    return PipelineSpec(
        preprocessor=PreprocessorSpec(kind=item.name, params=full), learner=base.learner
    )


def de_optimize(
    space: ParamSpace,
    objective: Objective,
    cfg: Optional[DeConfig] = None,
    base: Optional[PipelineSpec] = None,
    jobs: int = 1,
) -> OptimizerTrace:
    """Tune the single item of ``space``; the other pipeline slot comes from ``base``."""
    if len(space.items) != 1:
        raise ArgumentError(f"de_optimize tunes exactly one item, got {len(space.items)}")
    cfg = cfg or DeConfig()
    base = base or PipelineSpec()
    item = space.items[0]
    ranges = item.tunable
    np_ = cfg.population or item.population_size()
    cache = CachingObjective(objective, jobs=jobs)
    scored: list[Scored] = []

    def batch_fn(batch: list[Params]) -> list[float]:
        results = cache.batch([_spec_for(item, p, base) for p in batch])
        scored.extend(results)
        return [r.value for r in results]

    logger.info("DE on %s: np=%d, %d generations", item.name, np_, cfg.iters)
    run = differential_evolution(ranges, cfg=cfg, population=np_, batch_fn=batch_fn)

    trace = OptimizerTrace()
    for k, (params, s) in enumerate(zip(run.params, scored)):
        gen = k // np_
        trace.log(
            Evaluation(
                spec=_spec_for(item, params, base),
                value=s.value,
                stage="init" if gen == 0 else f"gen-{gen}",
                cached=s.cached,
                flags=s.flags,
            )
        )
    trace.population = [_spec_for(item, p, base) for p in run.population]
    return trace
