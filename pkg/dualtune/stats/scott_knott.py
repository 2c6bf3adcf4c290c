"""Scott-Knott ranking of treatments with a bootstrap test and the A12 effect size."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import ArgumentError
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)

SMALL_EFFECT = 0.6
DEFAULT_BOOT = 1000
DEFAULT_CONF = 0.95


def _values(x: Sequence[float], name: str = "values") -> np.ndarray:
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0:
        raise ArgumentError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ArgumentError(f"{name} must be finite")
    return arr


def a12(M: Sequence[float], N: Sequence[float]) -> float:
    """Probability that a value from M is bigger than one from N (ties count 1/2)."""
    m = _values(M, "M")
    n = _values(N, "N")
    gt = np.count_nonzero(m[:, None] > n[None, :])
    eq = np.count_nonzero(m[:, None] == n[None, :])
    return (gt + 0.5 * eq) / (m.size * n.size)


def bootstrap_significant(
    M: Sequence[float],
    N: Sequence[float],
    n_boot: int = DEFAULT_BOOT,
    conf: float = DEFAULT_CONF,
    seed: int = 0,
) -> bool:
    """Two-sided bootstrap test on the difference of means.

    Both groups are shifted onto the pooled mean to build the null; each
    replicate resamples both with replacement. The difference is significant
    when the observed ``|mean(M) - mean(N)|`` exceeds the ``conf`` quantile
    of the replicate differences.
    """
    if n_boot < 100:
        raise ArgumentError(f"n_boot must be at least 100, got {n_boot}")
    if not 0.0 < conf < 1.0:
        raise ArgumentError(f"conf must lie in (0, 1), got {conf}")
    m = _values(M, "M")
    n = _values(N, "N")
    observed = abs(m.mean() - n.mean())
    if observed == 0.0:
        return False
    pooled = np.concatenate([m, n]).mean()
    m0 = m - m.mean() + pooled
    n0 = n - n.mean() + pooled
    rng = make_rng(seed, "bootstrap")
    bm = rng.choice(m0, size=(n_boot, m0.size), replace=True).mean(axis=1)
    bn = rng.choice(n0, size=(n_boot, n0.size), replace=True).mean(axis=1)
    null = np.abs(bm - bn)
    return bool(observed > np.quantile(null, conf))


def expected_delta(m: Sequence[float], n: Sequence[float]) -> float:
    """E(Δ) of splitting l = m + n into m and n."""
    m = _values(m, "m")
    n = _values(n, "n")
    mu = np.concatenate([m, n]).mean()
    ls = m.size + n.size
    return m.size / ls * (m.mean() - mu) ** 2 + n.size / ls * (n.mean() - mu) ** 2


@dataclass(frozen=True)
class TreatmentSamples:
    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in _values(self.values)))

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def median(self) -> float:
        return float(np.median(self.values))


@dataclass(frozen=True)
class SplitDecision:
    """One candidate split examined during the recursion."""

    left: tuple[str, ...]
    right: tuple[str, ...]
    delta: float
    a12: float
    significant: bool

    @property
    def accepted(self) -> bool:
        return self.significant and self.a12 >= SMALL_EFFECT


@dataclass
class RankAssignment:
    """Treatment name to rank, 1 being best, plus the splits that were tried."""

    ranks: dict[str, int]
    splits: list[SplitDecision] = field(default_factory=list)

    def __getitem__(self, name: str) -> int:
        return self.ranks[name]

    @property
    def n_ranks(self) -> int:
        return max(self.ranks.values()) if self.ranks else 0

    def best(self) -> list[str]:
        return sorted(n for n, r in self.ranks.items() if r == 1)


def scott_knott(
    groups: Sequence[TreatmentSamples],
    seed: int = 0,
    higher_is_better: bool = True,
    n_boot: int = DEFAULT_BOOT,
    conf: float = DEFAULT_CONF,
) -> RankAssignment:
    """Rank treatments by recursive mean splits.

    A split is kept only when the two halves differ by the bootstrap test
    and the better half beats the worse with A12 of at least 0.6. For
    metrics where lower is better the values are negated first.
    """
    if not groups:
        return RankAssignment(ranks={})
    sign = 1.0 if higher_is_better else -1.0
    oriented = [(g.name, sign * np.asarray(g.values)) for g in groups]
    # Best mean first; names break ties so input order never matters
    oriented.sort(key=lambda item: (-item[1].mean(), item[0]))
    leaves: list[list[str]] = []
    splits: list[SplitDecision] = []

    def divide(part: list[tuple[str, np.ndarray]]) -> None:
        if len(part) < 2:
            leaves.append([name for name, _ in part])
            return
        best_cut, best_delta = 1, -1.0
        for cut in range(1, len(part)):
            left = np.concatenate([v for _, v in part[:cut]])
            right = np.concatenate([v for _, v in part[cut:]])
            delta = expected_delta(left, right)
            if delta > best_delta:
                best_cut, best_delta = cut, delta
        left = np.concatenate([v for _, v in part[:best_cut]])
        right = np.concatenate([v for _, v in part[best_cut:]])
        names = [name for name, _ in part]
        decision = SplitDecision(
            left=tuple(names[:best_cut]),
            right=tuple(names[best_cut:]),
            delta=float(best_delta),
            a12=float(a12(left, right)),
            significant=bootstrap_significant(
                left, right, n_boot=n_boot, conf=conf, seed=_split_seed(seed, names)
            ),
        )
        splits.append(decision)
        logger.debug(
            "split %s | %s: delta=%.4g a12=%.3f significant=%s",
            decision.left, decision.right, decision.delta, decision.a12, decision.significant,
        )
        if decision.accepted:
            divide(part[:best_cut])
            divide(part[best_cut:])
        else:
            leaves.append(names)

    divide(oriented)
    ranks = {name: rank for rank, leaf in enumerate(leaves, start=1) for name in leaf}
    return RankAssignment(ranks=ranks, splits=splits)


def _split_seed(seed: int, names: list[str]) -> int:
    return int(make_rng(seed, "split", *sorted(names)).integers(2**31))


def rank_table(
    rows: Iterable[dict],
    metric: str,
    higher_is_better: bool = True,
    seed: int = 0,
    n_boot: int = DEFAULT_BOOT,
) -> list[dict]:
    """Rank treatments per (project, filter) on one metric column.

    Returns rows ``metric, project, filter, treatment, median, rank`` sorted
    by project, filter, rank and treatment.
    """
    grouped: dict[tuple[str, str], dict[str, list[float]]] = {}
    for row in rows:
        key = (str(row["project"]), str(row["filter"]))
        grouped.setdefault(key, {}).setdefault(str(row["treatment"]), []).append(
            float(row[metric])
        )
    out: list[dict] = []
    for (project, filt) in sorted(grouped):
        treatments = grouped[(project, filt)]
        samples = [TreatmentSamples(name, tuple(v)) for name, v in sorted(treatments.items())]
        assignment = scott_knott(
            samples, seed=seed, higher_is_better=higher_is_better, n_boot=n_boot
        )
        block = [
            {
                "metric": metric,
                "project": project,
                "filter": filt,
                "treatment": s.name,
                "median": s.median,
                "rank": assignment[s.name],
            }
            for s in samples
        ]
        block.sort(key=lambda r: (r["rank"], r["treatment"]))
        out.extend(block)
    return out


def best_treatments(table: Iterable[dict]) -> set[tuple[str, str, str, str]]:
    """(metric, project, filter, treatment) keys that share rank 1."""
    return {
        (r["metric"], r["project"], r["filter"], r["treatment"]) for r in table if r["rank"] == 1
    }
