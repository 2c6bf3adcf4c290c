"""Experiment rig: filter the training set, tune per treatment and seed, test, report."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

import pandas as pd
from joblib import Parallel, delayed

from ..data.folds import split_folds
from ..data.loader import load_dataset, write_dataset
from ..errors import ConfigError, DualtuneError, ExperimentError
from ..filters.registry import FilterRegistry
from ..metrics.ranking import N_DECILES, map_deciles
from ..models.config import (
    ClniParams,
    DeConfig,
    ExperimentConfig,
    FarsecParams,
    FilterName,
    SwiftConfig,
    Treatment,
)
from ..models.dataset import Dataset
from ..models.pipeline import PipelineSpec
from ..models.results import Evaluation, OptimizerTrace, RunRecord
from ..models.space import LEARNER_NAMES, PREPROCESSOR_NAMES, ParamSpace, default_space, item_for
from ..optimize.de import de_optimize
from ..optimize.evaluate import final_fit_and_test
from ..optimize.objective import CachingObjective, PipelineObjective
from ..optimize.swift import swift_optimize
from ..utils.seeding import derive_seed
from .report import Report, emit_report

logger = logging.getLogger(__name__)

# SMOTE always runs ten DE generations
SMOTE_DE_ITERS = 10


@dataclass(frozen=True)
class TuneContext:
    """What a treatment needs to pick a pipeline for one seed."""

    train: Dataset
    cfg: ExperimentConfig
    seed: int
    jobs: int = 1

    def objective(self) -> PipelineObjective:
        folds = split_folds(self.train, self.cfg.folds, self.seed)
        return PipelineObjective(self.train, folds, self.cfg.goal, self.seed)

    def baseline(self) -> PipelineSpec:
        return PipelineSpec.of("None", self.cfg.baseline_learner.value)

    def de_config(self, item: str, iters: Optional[int] = None) -> DeConfig:
        return self.cfg.de.model_copy(
            update={
                "iters": iters or self.cfg.de_iters,
                "seed": derive_seed(self.seed, "de", item),
            }
        )


Tuner = Callable[[TuneContext], OptimizerTrace]


def tune_baseline(ctx: TuneContext) -> OptimizerTrace:
    trace = OptimizerTrace()
    trace.log(Evaluation(spec=ctx.baseline(), value=0.0, stage="default"))
    return trace


def tune_preproc_only(ctx: TuneContext) -> OptimizerTrace:
    """Every pre-processor at its defaults in front of the baseline learner."""
    learner = ctx.cfg.baseline_learner.value
    specs = [PipelineSpec.of(name, learner) for name in PREPROCESSOR_NAMES]
    scored = CachingObjective(ctx.objective(), jobs=ctx.jobs).batch(specs)
    trace = OptimizerTrace()
    for spec, s in zip(specs, scored):
        trace.log(Evaluation(spec=spec, value=s.value, stage="grid", flags=s.flags))
    return trace


def _merge(traces: list[OptimizerTrace]) -> OptimizerTrace:
    merged = OptimizerTrace()
    for t in traces:
        for e in t.evaluations:
            merged.log(e)
    return merged


def tune_de_learner(ctx: TuneContext) -> OptimizerTrace:
    """DE over each learner's parameters with no pre-processing; best learner wins."""
    objective = ctx.objective()
    traces = []
    for name in LEARNER_NAMES:
        space = ParamSpace(items=[item_for(name)])
        traces.append(
            de_optimize(
                space, objective, ctx.de_config(name), PipelineSpec.of("None", name), ctx.jobs
            )
        )
    return _merge(traces)


def tune_de_preproc(ctx: TuneContext) -> OptimizerTrace:
    """DE over each pre-processor's parameters in front of the baseline learner."""
    objective = ctx.objective()
    base = ctx.baseline()
    traces = []
    for name in PREPROCESSOR_NAMES:
        item = item_for(name)
        if not item.tunable:
            spec = PipelineSpec.of(name, base.learner.kind.value)
            s = CachingObjective(objective)(spec)
            trace = OptimizerTrace()
            trace.log(Evaluation(spec=spec, value=s.value, stage="default", flags=s.flags))
            traces.append(trace)
            continue
        iters = SMOTE_DE_ITERS if name == "SMOTE" else None
        cfg = ctx.de_config(name, iters)
        traces.append(de_optimize(ParamSpace(items=[item]), objective, cfg, base, ctx.jobs))
    return _merge(traces)


def tune_swift(ctx: TuneContext) -> OptimizerTrace:
    cfg: SwiftConfig = ctx.cfg.swift.model_copy(
        update={"seed": derive_seed(ctx.seed, "swift")}
    )
    return swift_optimize(default_space(), ctx.objective(), cfg)


TUNERS: dict[Treatment, Tuner] = {
    Treatment.FARSEC_BASELINE: tune_baseline,
    Treatment.PREPROC_ONLY: tune_preproc_only,
    Treatment.DE_LEARNER: tune_de_learner,
    Treatment.DE_PREPROC: tune_de_preproc,
    Treatment.SWIFT: tune_swift,
}


def run_cell(
    treatment: Treatment,
    seed: int,
    train: Dataset,
    test: Dataset,
    cfg: ExperimentConfig,
    jobs: int = 1,
) -> RunRecord:
    """Tune, refit on the full training set and score the held-out test set."""
    treatment = Treatment(treatment)
    start = time.perf_counter()
    try:
        trace = TUNERS[treatment](TuneContext(train=train, cfg=cfg, seed=seed, jobs=jobs))
        spec = trace.best_spec
        result, ranked = final_fit_and_test(spec, train, test, seed)
        if len(ranked) >= N_DECILES:
            deciles = map_deciles(ranked, literal=cfg.literal_ap)
        else:
            logger.warning("test set has %d records; MAP deciles skipped", len(ranked))
            deciles = []
    except ExperimentError:
        raise
    except DualtuneError as exc:
        raise ExperimentError(str(exc), treatment.value, seed) from exc
    minutes = (time.perf_counter() - start) / 60.0 if cfg.timing else 0.0
    logger.info(
        "%s seed=%d: %s g=%.3f pd=%.3f pf=%.3f",
        treatment.value, seed, spec.label(), result.g, result.pd, result.pf,
    )
    tuned = treatment != Treatment.FARSEC_BASELINE
    return RunRecord(
        treatment=treatment.value,
        seed=seed,
        result=result,
        deciles=deciles,
        minutes=minutes,
        pipeline=spec.label(),
        trace_length=len(trace) if tuned else 0,
        extra={"spec": spec.key(), "cv_value": trace.best_value if tuned else ""},
    )


def load_inputs(cfg: ExperimentConfig) -> tuple[Dataset, Dataset]:
    for path in (cfg.train, cfg.test):
        if not path.is_file():
            raise ConfigError(f"dataset not found: {path}")
    return load_dataset(cfg.train), load_dataset(cfg.test)


def filter_training(cfg: ExperimentConfig, train: Dataset) -> Dataset:
    registry = FilterRegistry(cfg.farsec, cfg.clni)
    try:
        filtered = registry.apply(cfg.filter, train)
    except DualtuneError as exc:
        raise ExperimentError(str(exc), f"filter {cfg.filter.value}") from exc
    logger.info(
        "filter %s kept %d of %d training records",
        cfg.filter.value, len(filtered), len(train),
    )
    return filtered


def run_experiment(
    cfg: ExperimentConfig,
    write: bool = True,
    data: Optional[tuple[Dataset, Dataset]] = None,
) -> Report:
    """Run every (treatment, seed) cell and assemble the report.

    The filter runs once; cells may run in parallel and are merged in
    (treatment, seed) order, so output does not depend on ``cfg.jobs``.
    """
    if not cfg.seeds:
        raise ConfigError("empty seed list")
    train, test = data if data is not None else load_inputs(cfg)
    train = filter_training(cfg, train)

    cells = [(t, s) for t in cfg.treatments for s in cfg.seeds]
    if cfg.jobs > 1 and len(cells) > 1:
        records = Parallel(n_jobs=cfg.jobs)(
            delayed(run_cell)(t, s, train, test, cfg) for t, s in cells
        )
    else:
        records = [run_cell(t, s, train, test, cfg, cfg.jobs) for t, s in cells]

    report = Report.from_records(
        cfg.project, cfg.filter.value, cfg.seeds, list(records), n_boot=cfg.n_boot
    )
    if write:
        emit_report(report, cfg.out)
    return report


def export_filters(
    train_path: Path,
    names: Iterable[FilterName],
    out: Path,
    farsec: Optional[FarsecParams] = None,
    clni: Optional[ClniParams] = None,
    project: str = "",
) -> list[Path]:
    """Write each filtered training set plus ``filter_stats.csv``."""
    if not Path(train_path).is_file():
        raise ConfigError(f"dataset not found: {train_path}")
    train = load_dataset(train_path)
    project = project or Path(train_path).stem
    registry = FilterRegistry(farsec, clni)
    out = Path(out)
    paths: list[Path] = []
    stats: list[dict] = []
    for name in names:
        name = FilterName(name)
        try:
            filtered = registry.apply(name, train)
        except DualtuneError as exc:
            raise ExperimentError(str(exc), f"filter {name.value}") from exc
        paths.append(write_dataset(filtered, out / f"{project}_{name.value}.csv"))
        stats.append({"project": project, "filter": name.value, **filtered.stats().model_dump()})
    frame = pd.DataFrame(
        stats, columns=["project", "filter", "n_records", "sbr_count", "nsbr_count", "sbr_pct"]
    )
    out.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out / "filter_stats.csv", index=False, lineterminator="\n")
    paths.append(out / "filter_stats.csv")
    return paths
