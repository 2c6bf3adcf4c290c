"""Exception hierarchy shared by every dualtune module."""

from __future__ import annotations

from typing import Optional


class DualtuneError(Exception):
    """Base class for all errors raised by dualtune."""


class ConfigError(DualtuneError):
    """Invalid configuration (CLI exit code 2)."""


class ArgumentError(DualtuneError):
    """An operation was called with arguments outside its domain."""


class SchemaError(DualtuneError):
    """A dataset file does not have the expected columns."""


class ParseError(DualtuneError):
    """A dataset cell could not be parsed."""

    def __init__(self, message: str, row: int, column: Optional[str] = None):
        super().__init__(message)
        self.row = row
        self.column = column

    def __reduce__(self):
        return (type(self), (self.args[0], self.row, self.column))


class ValidationError(DualtuneError):
    """A dataset violates a content invariant (labels, counts, signs)."""


class ShapeError(DualtuneError):
    """Matrix width does not match what a fitted object expects."""


class DomainError(DualtuneError):
    """Input values fall outside a transform's mathematical domain."""


class FilterError(DualtuneError):
    """A training-set filter cannot run on the given data."""


class OversamplingError(DualtuneError):
    """SMOTE cannot synthesise records from the given data."""


class TrainingError(DualtuneError):
    """A learner cannot be trained on the given data."""


class ExperimentError(DualtuneError):
    """A module error raised while running one (treatment, seed) cell."""

    def __init__(self, message: str, treatment: str, seed: Optional[int] = None):
        context = treatment if seed is None else f"{treatment} seed={seed}"
        super().__init__(f"[{context}] {message}")
        self.message = message
        self.treatment = treatment
        self.seed = seed

    def __reduce__(self):
        return (type(self), (self.message, self.treatment, self.seed))
