"""Filter registry: the eight named training-set variants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..models.config import ClniParams, FarsecParams, FilterName
from ..models.dataset import Dataset
from .clni import apply_clni
from .farsec import SupportKind, apply_farsec_filter, score_keywords

FilterFn = Callable[[Dataset], Dataset]


@dataclass(frozen=True)
class FilterSummary:
    name: str
    support: Optional[str]
    clni: bool
    description: str


class FilterRegistry:
    def __init__(
        self,
        farsec: Optional[FarsecParams] = None,
        clni: Optional[ClniParams] = None,
    ):
        self.farsec = farsec or FarsecParams()
        self.clni = clni or ClniParams()
        self._filters: dict[str, tuple[Optional[SupportKind], bool, str]] = {}
        self._register_defaults()

    def _register_defaults(self):
        self._filters[FilterName.TRAIN.value] = (None, False, "Unfiltered training data.")
        self._filters[FilterName.FARSEC.value] = (
            SupportKind.PLAIN, False, "Apply no support function.",
        )
        self._filters[FilterName.FARSECSQ.value] = (
            SupportKind.SQUARED, False, "Square the numerator of the support function.",
        )
        self._filters[FilterName.FARSECTWO.value] = (
            SupportKind.TIMES_TWO, False, "Double the NSBR frequency.",
        )
        self._filters[FilterName.CLNI.value] = (None, True, "CLNI noise removal only.")
        self._filters[FilterName.CLNIFARSEC.value] = (
            SupportKind.PLAIN, True, "CLNI over the farsec output.",
        )
        self._filters[FilterName.CLNIFARSECSQ.value] = (
            SupportKind.SQUARED, True, "CLNI over the farsecsq output.",
        )
        self._filters[FilterName.CLNIFARSECTWO.value] = (
            SupportKind.TIMES_TWO, True, "CLNI over the farsectwo output.",
        )

    @property
    def names(self) -> list[str]:
        return list(self._filters)

    def get(self, name: str | FilterName) -> FilterFn:
        key = name.value if isinstance(name, FilterName) else name
        if key not in self._filters:
            raise KeyError(f"unknown filter {key!r}; expected one of {self.names}")
        support, use_clni, _ = self._filters[key]

        def run(train: Dataset) -> Dataset:
            out = train
            if support is not None:
                scores = score_keywords(out, support, self.farsec.keyword_count)
                out = apply_farsec_filter(out, scores, self.farsec.cutoff)
            if use_clni:
                out = apply_clni(out, self.clni)
            return out

        return run

    def apply(self, name: str | FilterName, train: Dataset) -> Dataset:
        return self.get(name)(train)

    def list_summaries(self) -> list[FilterSummary]:
        return [
            FilterSummary(
                name=name,
                support=support.value if support else None,
                clni=use_clni,
                description=desc,
            )
            for name, (support, use_clni, desc) in self._filters.items()
        ]
