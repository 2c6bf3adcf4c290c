"""Objective functions over pipeline specs, with a per-run evaluation cache."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Union

from joblib import Parallel, delayed

from ..errors import DualtuneError
from ..models.config import Goal
from ..models.dataset import Dataset, FoldAssignment
from ..models.pipeline import PipelineSpec
from .evaluate import cross_validate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObjectiveValue:
    value: float
    flags: tuple[str, ...] = ()


Objective = Callable[[PipelineSpec], Union[float, ObjectiveValue]]


class PipelineObjective:
    """Cross-validated goal value of a pipeline, oriented so larger is better.

    Goals where lower is better (pf) are negated. Pipelines that cannot be
    fitted (domain, training or oversampling errors) score the goal's worst
    value and carry the "invalid" flag.
    """

    def __init__(self, train: Dataset, folds: FoldAssignment, goal: Goal = Goal.G, seed: int = 0):
        self.train = train
        self.folds = folds
        self.goal = Goal(goal)
        self.seed = seed

    def orient(self, raw: float) -> float:
        return raw if self.goal.higher_is_better else -raw

    def __call__(self, spec: PipelineSpec) -> ObjectiveValue:
        try:
            cv = cross_validate(spec, self.train, self.folds, self.goal.value, self.seed)
        except DualtuneError as exc:
            logger.debug("%s is invalid: %s", spec.label(), exc)
            return ObjectiveValue(self.orient(self.goal.worst), ("invalid",))
        return ObjectiveValue(self.orient(cv.value), tuple(cv.flags))


@dataclass
class Scored:
    value: float
    flags: list[str] = field(default_factory=list)
    cached: bool = False


def _unpack(result: Union[float, ObjectiveValue]) -> tuple[float, list[str]]:
    if isinstance(result, ObjectiveValue):
        return float(result.value), list(result.flags)
    return float(result), []


class CachingObjective:
    """Memoises an objective by canonical spec key for one optimizer run.

    Cache hits are still reported to the caller, which logs them and
    charges them to the budget.
    """

    def __init__(self, objective: Objective, jobs: int = 1):
        self.objective = objective
        self.jobs = jobs
        self._cache: dict[str, tuple[float, list[str]]] = {}

    def __len__(self) -> int:
        return len(self._cache)

    def __call__(self, spec: PipelineSpec) -> Scored:
        return self.batch([spec])[0]

    def batch(self, specs: list[PipelineSpec]) -> list[Scored]:
        """Score specs, evaluating unseen keys in parallel and merging in submission order."""
        keys = [s.key() for s in specs]
        todo: dict[str, PipelineSpec] = {}
        for key, spec in zip(keys, specs):
            if key not in self._cache and key not in todo:
                todo[key] = spec
        if todo:
            if self.jobs > 1 and len(todo) > 1:
                results = Parallel(n_jobs=self.jobs, prefer="threads")(
                    delayed(self.objective)(s) for s in todo.values()
                )
            else:
                results = [self.objective(s) for s in todo.values()]
            fresh = set(todo)
        else:
            results, fresh = [], set()
        for key, result in zip(todo, results):
            self._cache[key] = _unpack(result)

        out: list[Scored] = []
        for key in keys:
            value, flags = self._cache[key]
            first = key in fresh
            fresh.discard(key)
            out.append(Scored(value=value, flags=list(flags), cached=not first))
        return out
