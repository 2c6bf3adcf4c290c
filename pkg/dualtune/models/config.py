"""Configuration models for filters, optimizers and the experiment rig."""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigError
from .pipeline import LearnerKind


class Goal(str, Enum):
    G = "g"
    PD = "pd"
    PF = "pf"
    F = "f"
    PREC = "prec"

    @property
    def higher_is_better(self) -> bool:
        return self != Goal.PF

    @property
    def worst(self) -> float:
        return 1.0 if self == Goal.PF else 0.0


class FilterName(str, Enum):
    TRAIN = "train"
    FARSEC = "farsec"
    FARSECSQ = "farsecsq"
    FARSECTWO = "farsectwo"
    CLNI = "clni"
    CLNIFARSEC = "clnifarsec"
    CLNIFARSECSQ = "clnifarsecsq"
    CLNIFARSECTWO = "clnifarsectwo"


class Treatment(str, Enum):
    FARSEC_BASELINE = "farsec-baseline"
    DE_LEARNER = "de-learner"
    PREPROC_ONLY = "preproc-only"
    DE_PREPROC = "de-preproc"
    SWIFT = "swift"


class OptimizerName(str, Enum):
    SWIFT = "swift"
    DE3 = "de3"
    DE10 = "de10"


class ClniParams(BaseModel):
    N: int = Field(default=5, ge=1)
    noise_threshold: float = Field(default=0.75, gt=0, le=1)
    stop_similarity: float = Field(default=0.99, gt=0, le=1)
    # Noise fraction a flagged NSBR must also reach to be removed
    removal_limit: float = Field(default=0.75, gt=0, le=1)
    max_iterations: int = Field(default=20, ge=1)


class FarsecParams(BaseModel):
    keyword_count: int = Field(default=100, ge=1)
    cutoff: float = Field(default=0.75, gt=0, lt=1)


class DeStrategy(str, Enum):
    RAND1 = "rand1"
    BEST1 = "best1"


class DeUpdating(str, Enum):
    DEFERRED = "deferred"
    IMMEDIATE = "immediate"


class DeConfig(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    # None means the item's own population (10·k or its fixed override)
    population: Optional[int] = Field(default=None, ge=4, alias="np")
    f: float = Field(default=0.8, gt=0, le=2)
    cr: float = Field(default=0.9, ge=0, le=1)
    iters: int = Field(default=10, ge=1)
    seed: int = 0
    # rand1: base vector drawn at random; best1: base vector is the current best
    strategy: DeStrategy = DeStrategy.RAND1
    # deferred: a generation is scored as one batch; immediate: replace as you go
    updating: DeUpdating = DeUpdating.DEFERRED


class SwiftConfig(BaseModel):
    epsilon: float = Field(default=0.2, gt=0)
    n1: int = Field(default=12, ge=1)
    n2: int = Field(default=30, ge=1)
    seed: int = 0


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    train: Path
    test: Path
    project: str = ""
    filter: FilterName = FilterName.TRAIN
    treatments: list[Treatment] = Field(default_factory=lambda: [Treatment.SWIFT])
    goal: Goal = Goal.G
    seeds: list[int] = Field(default_factory=lambda: list(range(1, 11)))
    folds: int = Field(default=10, ge=2)
    optimizer: OptimizerName = OptimizerName.SWIFT
    swift: SwiftConfig = Field(default_factory=SwiftConfig)
    de: DeConfig = Field(default_factory=DeConfig)
    farsec: FarsecParams = Field(default_factory=FarsecParams)
    clni: ClniParams = Field(default_factory=ClniParams)
    baseline_learner: LearnerKind = LearnerKind.NB
    out: Path = Path("out")
    jobs: int = Field(default=1, ge=1)
    n_boot: int = Field(default=1000, ge=100)
    timing: bool = True
    literal_ap: bool = False

    @model_validator(mode="before")
    @classmethod
    def _flat_keys(cls, data):
        # Config files may use flat optimizer keys: epsilon, n1, n2, np, seed
        if not isinstance(data, dict):
            return data
        data = dict(data)
        swift = dict(data.get("swift") or {})
        de = dict(data.get("de") or {})
        for key in ("epsilon", "n1", "n2"):
            if key in data:
                swift[key] = data.pop(key)
        for key in ("np", "iters", "f", "cr"):
            if key in data:
                de[key] = data.pop(key)
        if "seed" in data:
            if data.get("seeds") is not None:
                raise ValueError("give either seed or seeds, not both")
            data["seeds"] = [data.pop("seed")]
        if swift:
            data["swift"] = swift
        if de:
            data["de"] = de
        return data

    @model_validator(mode="after")
    def _check(self) -> ExperimentConfig:
        if not self.seeds:
            raise ValueError("seeds must not be empty")
        if not self.treatments:
            raise ValueError("at least one treatment is required")
        if not self.project:
            self.project = self.train.stem
        return self

    @property
    def de_iters(self) -> int:
        """DE generations implied by the optimizer name (de3/de10)."""
        if self.optimizer == OptimizerName.DE3:
            return 3
        if self.optimizer == OptimizerName.DE10:
            return 10
        return self.de.iters

    @classmethod
    def from_json(cls, path: Path, **overrides) -> ExperimentConfig:
        data = read_json(path)
        for key in ("swift", "de"):
            sub = overrides.pop(key, None)
            if sub:
                data[key] = {**data.get(key, {}), **sub}
        if overrides.get("seeds") is not None:
            data.pop("seed", None)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.model_validate(data)


def read_json(path: Path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data


def filter_params_from_json(path: Path) -> tuple[FarsecParams, ClniParams]:
    """The ``farsec`` and ``clni`` sections of a config file; other keys are ignored."""
    data = read_json(path)
    return (
        FarsecParams.model_validate(data.get("farsec") or {}),
        ClniParams.model_validate(data.get("clni") or {}),
    )
