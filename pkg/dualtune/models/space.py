"""Tuning ranges for every learner and pre-processor on the menu."""

from __future__ import annotations

import math
from enum import Enum
from typing import Any, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

ParamValue = Union[bool, int, float, str, None]


class ParamType(str, Enum):
    INT = "int"
    REAL = "real"
    CATEGORICAL = "categorical"
    BOOLEAN = "boolean"


class ItemKind(str, Enum):
    LEARNER = "learner"
    PREPROCESSOR = "preprocessor"


class ParamRange(BaseModel):
    name: str
    type: ParamType
    lo: Optional[float] = None
    hi: Optional[float] = None
    choices: Optional[list[Any]] = None
    default: ParamValue = None
    # Accepted in specs but never searched (copy/order layout flags)
    inert: bool = False

    @model_validator(mode="after")
    def _check(self) -> ParamRange:
        if self.type in (ParamType.INT, ParamType.REAL):
            if self.lo is None or self.hi is None or self.lo > self.hi:
                raise ValueError(f"{self.name}: numeric range needs lo <= hi")
        elif self.type == ParamType.BOOLEAN:
            self.choices = [True, False]
        elif not self.choices:
            raise ValueError(f"{self.name}: categorical range needs choices")
        if not self.admits(self.default):
            raise ValueError(f"{self.name}: default {self.default!r} outside range")
        return self

    @property
    def is_numeric(self) -> bool:
        return self.type in (ParamType.INT, ParamType.REAL)

    def contains(self, value: ParamValue) -> bool:
        if self.type == ParamType.BOOLEAN:
            return isinstance(value, (bool, np.bool_))
        if self.type == ParamType.CATEGORICAL:
            return value in self.choices
        if value is None or isinstance(value, (bool, str)):
            return False
        if self.type == ParamType.INT and float(value) != math.floor(float(value)):
            return False
        return self.lo - 1e-12 <= float(value) <= self.hi + 1e-12

    def admits(self, value: ParamValue) -> bool:
        # None / "auto" defaults mean "unbounded" or "library rule" and stay legal
        return value == self.default or self.contains(value)

    # ── continuous embedding used by differential evolution ──

    @property
    def bounds(self) -> tuple[float, float]:
        if self.is_numeric:
            return float(self.lo), float(self.hi)
        return 0.0, float(len(self.choices) - 1)

    def snap(self, x: float) -> float:
        """Clip to bounds and round to the nearest legal embedded value."""
        lo, hi = self.bounds
        x = min(max(float(x), lo), hi)
        if self.type == ParamType.REAL:
            return x
        if self.type == ParamType.INT:
            v = float(math.floor(x + 0.5))
            if v > hi:
                v = float(math.floor(hi))
            if v < lo:
                v = float(math.ceil(lo))
            return v
        return float(min(max(int(math.floor(x + 0.5)), 0), len(self.choices) - 1))

    def decode(self, x: float) -> ParamValue:
        x = self.snap(x)
        if self.type == ParamType.REAL:
            return float(x)
        if self.type == ParamType.INT:
            return int(x)
        return self.choices[int(x)]

    def encode(self, value: ParamValue) -> float:
        if self.is_numeric:
            return float(value)
        return float(self.choices.index(value))

    def sample(
        self,
        rng: np.random.Generator,
        lo: Optional[float] = None,
        hi: Optional[float] = None,
    ) -> ParamValue:
        """Uniform draw, optionally inside a narrowed numeric interval."""
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        if self.type == ParamType.REAL:
            return float(rng.uniform(lo, hi)) if hi > lo else float(lo)
        if self.type == ParamType.INT:
            a = math.ceil(lo - 1e-9)
            b = math.floor(hi + 1e-9)
            if b < a:
                return int(round((lo + hi) / 2))
            return int(rng.integers(a, b + 1))
        return self.choices[int(rng.integers(len(self.choices)))]


class SpaceItem(BaseModel):
    name: str
    kind: ItemKind
    params: list[ParamRange] = Field(default_factory=list)
    # Differential evolution population override; None means 10·k
    de_population: Optional[int] = Field(default=None, ge=4)

    @property
    def tunable(self) -> list[ParamRange]:
        return [p for p in self.params if not p.inert]

    def param(self, name: str) -> ParamRange:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(f"{self.name} has no parameter {name!r}")

    def defaults(self) -> dict[str, ParamValue]:
        return {p.name: p.default for p in self.params}

    def population_size(self) -> int:
        if self.de_population is not None:
            return self.de_population
        return max(4, 10 * len(self.tunable))


class ParamSpace(BaseModel):
    items: list[SpaceItem]

    @property
    def learners(self) -> list[SpaceItem]:
        return [i for i in self.items if i.kind == ItemKind.LEARNER]

    @property
    def preprocessors(self) -> list[SpaceItem]:
        return [i for i in self.items if i.kind == ItemKind.PREPROCESSOR]

    def item(self, name: str) -> SpaceItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(f"no item named {name!r}")

    def restrict(self, names: list[str]) -> ParamSpace:
        return ParamSpace(items=[self.item(n) for n in names])


def _int(name: str, lo: int, hi: int, default: ParamValue) -> ParamRange:
    return ParamRange(name=name, type=ParamType.INT, lo=lo, hi=hi, default=default)


def _real(name: str, lo: float, hi: float, default: ParamValue) -> ParamRange:
    return ParamRange(name=name, type=ParamType.REAL, lo=lo, hi=hi, default=default)


def _bool(name: str, default: bool, inert: bool = False) -> ParamRange:
    return ParamRange(name=name, type=ParamType.BOOLEAN, default=default, inert=inert)


def _cat(name: str, choices: list[str], default: str, inert: bool = False) -> ParamRange:
    return ParamRange(
        name=name, type=ParamType.CATEGORICAL, choices=choices, default=default, inert=inert
    )


def _copy() -> ParamRange:
    return _bool("copy", True, inert=True)


# ---------------------------------------------------------------------------
# Default menu: learners and pre-processors with their tuning ranges
# ---------------------------------------------------------------------------

LEARNER_ITEMS: list[SpaceItem] = [
    SpaceItem(
        name="RF", kind=ItemKind.LEARNER, de_population=60,
        params=[
            _int("n_estimators", 10, 150, 10),
            _int("min_samples_leaf", 1, 20, 1),
            _int("min_samples_split", 2, 20, 2),
            _int("max_leaf_nodes", 2, 50, None),
            _real("max_features", 0.01, 1.0, "auto"),
            _int("max_depth", 1, 10, None),
        ],
    ),
    SpaceItem(
        name="LR", kind=ItemKind.LEARNER, de_population=30,
        params=[
            _real("C", 1.0, 10.0, 1.0),
            _int("max_iter", 50, 200, 100),
        ],
    ),
    SpaceItem(
        name="MLP", kind=ItemKind.LEARNER, de_population=60,
        params=[
            _real("alpha", 0.0001, 0.001, 0.0001),
            _real("learning_rate_init", 0.001, 0.01, 0.001),
            _real("power_t", 0.1, 1.0, 0.5),
            _int("max_iter", 50, 300, 200),
            _real("momentum", 0.1, 1.0, 0.9),
            _int("n_iter_no_change", 1, 100, 10),
        ],
    ),
    SpaceItem(
        name="KNN", kind=ItemKind.LEARNER, de_population=20,
        params=[
            _int("leaf_size", 10, 100, 30),
            _int("n_neighbors", 1, 10, 5),
        ],
    ),
    SpaceItem(
        name="NB", kind=ItemKind.LEARNER, de_population=10,
        params=[
            _real("var_smoothing", 0.0, 1.0, 1e-9),
        ],
    ),
]

PREPROCESSOR_ITEMS: list[SpaceItem] = [
    SpaceItem(
        name="SMOTE", kind=ItemKind.PREPROCESSOR, de_population=30,
        params=[
            _int("k", 1, 20, 5),
            _int("m", 50, 400, 50),
            _int("r", 1, 6, 2),
        ],
    ),
    SpaceItem(
        name="Normalizer", kind=ItemKind.PREPROCESSOR,
        params=[_cat("norm", ["l1", "l2", "max"], "l2"), _copy()],
    ),
    SpaceItem(
        name="StandardScaler", kind=ItemKind.PREPROCESSOR,
        params=[_copy(), _bool("with_mean", True), _bool("with_std", True)],
    ),
    SpaceItem(
        name="MinMaxScaler", kind=ItemKind.PREPROCESSOR,
        params=[_copy(), _real("min", -5.0, 0.0, 0.0), _real("max", 1.0, 5.0, 1.0)],
    ),
    SpaceItem(
        name="MaxAbsScaler", kind=ItemKind.PREPROCESSOR,
        params=[_copy()],
    ),
    SpaceItem(
        name="RobustScaler", kind=ItemKind.PREPROCESSOR,
        params=[
            _bool("with_centering", True),
            _bool("with_scaling", True),
            _real("q_min", 10.0, 40.0, 25.0),
            _real("q_max", 60.0, 90.0, 75.0),
            _copy(),
        ],
    ),
    SpaceItem(
        name="QuantileTransformer", kind=ItemKind.PREPROCESSOR,
        params=[
            _int("n_quantiles", 10, 2000, 1000),
            _cat("output_distribution", ["uniform", "normal"], "uniform"),
            _bool("ignore_implicit_zeros", False),
            _int("subsample", 100, 150000, 100000),
            _copy(),
        ],
    ),
    SpaceItem(
        name="PowerTransformer", kind=ItemKind.PREPROCESSOR,
        params=[
            _cat("method", ["yeo-johnson", "box-cox"], "yeo-johnson"),
            _bool("standardize", True),
            _copy(),
        ],
    ),
    SpaceItem(
        name="Binarizer", kind=ItemKind.PREPROCESSOR,
        params=[_real("threshold", 0.0, 10.0, 0.0), _copy()],
    ),
    SpaceItem(
        name="PolynomialFeatures", kind=ItemKind.PREPROCESSOR,
        params=[
            _int("degree", 2, 4, 2),
            _bool("interaction_only", False),
            _bool("include_bias", True),
            _cat("order", ["C", "F"], "C", inert=True),
        ],
    ),
    SpaceItem(name="None", kind=ItemKind.PREPROCESSOR),
]

DEFAULT_ITEMS: list[SpaceItem] = LEARNER_ITEMS + PREPROCESSOR_ITEMS

LEARNER_NAMES: tuple[str, ...] = tuple(i.name for i in LEARNER_ITEMS)
PREPROCESSOR_NAMES: tuple[str, ...] = tuple(i.name for i in PREPROCESSOR_ITEMS)


def default_space() -> ParamSpace:
    return ParamSpace(items=[i.model_copy(deep=True) for i in DEFAULT_ITEMS])


def item_for(name: str) -> SpaceItem:
    for it in DEFAULT_ITEMS:
        if it.name == name:
            return it
    raise KeyError(f"unknown learner or pre-processor {name!r}")
