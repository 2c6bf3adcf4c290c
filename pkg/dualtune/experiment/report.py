"""Report tables: per-seed rows, medians, Scott-Knott ranks, MAP deciles and runtime."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import pandas as pd

from ..errors import ConfigError, SchemaError
from ..metrics.ranking import N_DECILES, mean_average_precision
from ..models.results import RunRecord
from ..stats.scott_knott import DEFAULT_BOOT, best_treatments, rank_table

logger = logging.getLogger(__name__)

METRICS = ("pd", "pf", "prec", "f", "g", "ifa")
HIGHER_IS_BETTER = {"pd": True, "pf": False, "prec": True, "f": True, "g": True, "ifa": False}
KEY_COLUMNS = ["project", "filter", "treatment"]
RESULT_COLUMNS = KEY_COLUMNS + ["seed", *METRICS]
DECILE_COLUMNS = KEY_COLUMNS + ["seed"] + [f"d{d}" for d in range(1, N_DECILES + 1)] + ["map"]
RANK_COLUMNS = ["metric", "project", "filter", "treatment", "median", "rank"]
PIPELINE_COLUMNS = KEY_COLUMNS + ["seed", "pipeline", "spec", "cv_value", "evaluations"]


@dataclass
class Report:
    """Everything one experiment produced, as plain table rows."""

    seeds: list[int]
    rows: list[dict] = field(default_factory=list)
    deciles: list[dict] = field(default_factory=list)
    timings: list[dict] = field(default_factory=list)
    pipelines: list[dict] = field(default_factory=list)
    n_boot: int = DEFAULT_BOOT
    rank_seed: int = 0

    @classmethod
    def from_records(
        cls,
        project: str,
        filter_name: str,
        seeds: list[int],
        records: list[RunRecord],
        n_boot: int = DEFAULT_BOOT,
    ) -> Report:
        report = cls(seeds=list(seeds), n_boot=n_boot)
        for rec in records:
            key = {"project": project, "filter": filter_name, "treatment": rec.treatment}
            res = rec.result
            report.rows.append(
                {
                    **key,
                    "seed": rec.seed,
                    "pd": res.pd,
                    "pf": res.pf,
                    "prec": res.prec,
                    "f": res.f_score,
                    "g": res.g,
                    "ifa": res.ifa,
                }
            )
            if rec.deciles:
                report.deciles.append(
                    {**key, "seed": rec.seed}
                    | {f"d{d}": v for d, v in enumerate(rec.deciles, start=1)}
                    | {"map": mean_average_precision(rec.deciles)}
                )
            report.timings.append({**key, "seed": rec.seed, "minutes": rec.minutes})
            report.pipelines.append(
                {
                    **key,
                    "seed": rec.seed,
                    "pipeline": rec.pipeline,
                    "spec": rec.extra.get("spec", ""),
                    "cv_value": rec.extra.get("cv_value", ""),
                    "evaluations": rec.trace_length,
                }
            )
        return report

    def results_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=RESULT_COLUMNS)

    def medians(self) -> pd.DataFrame:
        """Per-treatment medians over seeds, in first-appearance order."""
        frame = self.results_frame()
        grouped = frame.groupby(KEY_COLUMNS, sort=False)
        out = grouped[list(METRICS)].median().reset_index()
        out.insert(3, "seeds", grouped.size().to_numpy())
        return out

    def ranks(self) -> pd.DataFrame:
        table: list[dict] = []
        for metric in METRICS:
            table.extend(
                rank_table(
                    self.rows,
                    metric,
                    higher_is_better=HIGHER_IS_BETTER[metric],
                    seed=self.rank_seed,
                    n_boot=self.n_boot,
                )
            )
        return pd.DataFrame(table, columns=RANK_COLUMNS)

    def winners(self, metric: str = "g") -> list[str]:
        """Treatments holding Scott-Knott rank 1 on ``metric`` in any project and filter."""
        best = best_treatments(self.ranks().to_dict(orient="records"))
        return sorted({treatment for m, _, _, treatment in best if m == metric})

    def runtime(self) -> pd.DataFrame:
        """Mean wall-clock minutes per treatment."""
        frame = pd.DataFrame(self.timings, columns=KEY_COLUMNS + ["seed", "minutes"])
        return frame.groupby(KEY_COLUMNS, sort=False)["minutes"].mean().reset_index()


def _write(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info("wrote %s (%d rows)", path, len(frame))
    return path


def _check(report: Report) -> None:
    if not report.seeds:
        raise ConfigError("empty seed list: nothing to report")
    if not report.rows:
        raise ConfigError("report has no result rows")


def write_rankings(report: Report, out: str | Path) -> list[Path]:
    """Write ``medians.csv`` and ``ranks.csv`` only."""
    _check(report)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    return [
        _write(report.medians(), out / "medians.csv"),
        _write(report.ranks(), out / "ranks.csv"),
    ]


def emit_report(report: Report, out: str | Path, pipelines: bool = True) -> list[Path]:
    """Write every report table under ``out``; identical reports give identical bytes."""
    _check(report)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    paths = [_write(report.results_frame(), out / "results.csv")]
    paths += write_rankings(report, out)
    deciles = pd.DataFrame(report.deciles, columns=DECILE_COLUMNS)
    paths.append(_write(deciles, out / "map_deciles.csv"))
    paths.append(_write(report.runtime(), out / "runtime.csv"))
    if pipelines and report.pipelines:
        paths.append(
            _write(pd.DataFrame(report.pipelines, columns=PIPELINE_COLUMNS), out / "pipelines.csv")
        )
    return paths


def read_results(
    path: str | Path, n_boot: int = DEFAULT_BOOT, seeds: Optional[list[int]] = None
) -> Report:
    """Rebuild a Report from a ``results.csv`` so ranks can be recomputed."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, keep_default_na=False)
    except (OSError, pd.errors.EmptyDataError) as exc:
        raise ConfigError(f"cannot read results {path}: {exc}") from exc
    missing = [c for c in RESULT_COLUMNS if c not in frame.columns]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing}")
    frame = frame[RESULT_COLUMNS].astype({"project": str, "filter": str, "treatment": str})
    if seeds is not None:
        frame = frame[frame["seed"].isin(seeds)]
    rows = frame.to_dict(orient="records")
    found = sorted({int(r["seed"]) for r in rows})
    return Report(seeds=found, rows=rows, n_boot=n_boot)
