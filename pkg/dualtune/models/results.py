"""Evaluation results, ranked prediction lists and optimizer traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .pipeline import PipelineSpec


class Confusion(BaseModel):
    TP: int = Field(default=0, ge=0)
    FN: int = Field(default=0, ge=0)
    FP: int = Field(default=0, ge=0)
    TN: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        return self.TP + self.FN + self.FP + self.TN

    @property
    def positives(self) -> int:
        return self.TP + self.FN

    @property
    def negatives(self) -> int:
        return self.FP + self.TN


class EvalResult(BaseModel):
    """Confusion counts and the metrics derived from them.

    Undefined metrics hold 0 and are listed in ``undefined`` by name.
    """

    confusion: Confusion
    pd: float = Field(ge=0, le=1)
    pf: float = Field(ge=0, le=1)
    prec: float = Field(ge=0, le=1)
    f_score: float = Field(ge=0, le=1)
    g: float = Field(ge=0, le=1)
    ifa: int = Field(default=0, ge=0)
    ifa_hit: bool = True
    undefined: list[str] = Field(default_factory=list)

    def value(self, goal: str) -> float:
        return {
            "g": self.g, "pd": self.pd, "pf": self.pf, "f": self.f_score, "prec": self.prec,
        }[goal]


@dataclass(frozen=True, eq=False)
class RankedList:
    """Records in ranking order: score descending, earlier record first on ties."""

    indices: np.ndarray
    ids: tuple[str, ...]
    scores: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if not (len(self.indices) == len(self.ids) == len(self.scores) == len(self.labels)):
            raise ValueError("ranked list columns differ in length")

    def __len__(self) -> int:
        return len(self.ids)

    def head(self, n: int) -> RankedList:
        return RankedList(
            indices=self.indices[:n], ids=self.ids[:n],
            scores=self.scores[:n], labels=self.labels[:n],
        )

    def where(self, mask: np.ndarray) -> RankedList:
        keep = np.flatnonzero(mask)
        return RankedList(
            indices=self.indices[keep], ids=tuple(self.ids[i] for i in keep),
            scores=self.scores[keep], labels=self.labels[keep],
        )


class Evaluation(BaseModel):
    """One logged objective call."""

    spec: PipelineSpec
    value: float
    stage: str = ""
    cached: bool = False
    # Names of metrics that were undefined in at least one fold, or "invalid"
    flags: list[str] = Field(default_factory=list)


class OptimizerTrace(BaseModel):
    evaluations: list[Evaluation] = Field(default_factory=list)
    best_index: Optional[int] = None
    weights: dict[str, float] = Field(default_factory=dict)
    population: list[PipelineSpec] = Field(default_factory=list)
    # Per-parameter (lo, hi) at the end of refinement, keyed "item.param"
    ranges: dict[str, tuple[float, float]] = Field(default_factory=dict)
    # Ranges before refinement and after each improving round
    range_history: list[dict[str, tuple[float, float]]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_best(self) -> OptimizerTrace:
        if self.best_index is not None and not 0 <= self.best_index < len(self.evaluations):
            raise ValueError("best_index out of range")
        return self

    def __len__(self) -> int:
        return len(self.evaluations)

    def log(self, evaluation: Evaluation) -> bool:
        """Append an evaluation; True when it strictly improves the incumbent."""
        self.evaluations.append(evaluation)
        if self.best_index is None or evaluation.value > self.best_value:
            self.best_index = len(self.evaluations) - 1
            return True
        return False

    @property
    def best(self) -> Optional[Evaluation]:
        return None if self.best_index is None else self.evaluations[self.best_index]

    @property
    def best_spec(self) -> Optional[PipelineSpec]:
        return None if self.best is None else self.best.spec

    @property
    def best_value(self) -> float:
        return float("-inf") if self.best is None else self.best.value

    @property
    def values(self) -> list[float]:
        return [e.value for e in self.evaluations]

    def running_best(self) -> list[float]:
        out: list[float] = []
        cur = float("-inf")
        for v in self.values:
            cur = max(cur, v)
            out.append(cur)
        return out


@dataclass
class RunRecord:
    """One (treatment, seed) outcome collected by the experiment runner."""

    treatment: str
    seed: int
    result: EvalResult
    deciles: list[float]
    minutes: float
    pipeline: str = ""
    trace_length: int = 0
    extra: dict = field(default_factory=dict)
