"""Entry point: python -m dualtune"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from pydantic import ValidationError as PydanticValidationError

from .errors import ConfigError, DualtuneError
from .experiment.report import Report, read_results, write_rankings
from .experiment.runner import export_filters, run_experiment
from .models.config import ExperimentConfig, FilterName, Treatment, filter_params_from_json

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def parse_seeds(text: str) -> list[int]:
    """``1..10`` (inclusive range), ``1,4,7`` or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            seeds = list(range(int(lo), int(hi) + 1))
        else:
            seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse seeds {text!r}") from exc
    if not seeds:
        raise ConfigError(f"seed list {text!r} is empty")
    return seeds


def _add_experiment_args(p: argparse.ArgumentParser, treatment: bool) -> None:
    p.add_argument("--config", type=Path, help="JSON ExperimentConfig; flags override it")
    p.add_argument("--train", type=Path, help="Training CSV")
    p.add_argument("--test", type=Path, help="Testing CSV")
    p.add_argument("--project", help="Project label (default: train file stem)")
    p.add_argument("--filter", choices=[f.value for f in FilterName], help="Training filter")
    if treatment:
        p.add_argument(
            "--treatment", choices=[t.value for t in Treatment], help="Treatment to run"
        )
    p.add_argument("--goal", choices=["g", "pd", "pf", "f", "prec"], help="Tuning goal")
    p.add_argument("--seeds", help="Seeds, e.g. 1..10 or 1,2,3")
    p.add_argument("--optimizer", choices=["swift", "de3", "de10"], help="DE generations")
    p.add_argument("--epsilon", type=float, help="SWIFT ε")
    p.add_argument("--n1", type=int, help="SWIFT item-ranking evaluations")
    p.add_argument("--n2", type=int, help="SWIFT refinement evaluations")
    p.add_argument("--np", type=int, help="DE population size")
    p.add_argument("--iters", type=int, help="DE generations")
    p.add_argument("--out", type=Path, help="Output directory")
    p.add_argument("--jobs", type=int, help="Parallel workers")
    p.add_argument("--no-timing", action="store_true", help="Record runtime as 0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualtune",
        description="Dualtune: tune pre-processor + learner pipelines for security bug reports",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v INFO, -vv DEBUG")
    sub = parser.add_subparsers(dest="verb", required=True)

    tune = sub.add_parser("tune", help="Run one treatment over the seeds")
    _add_experiment_args(tune, treatment=True)

    bench = sub.add_parser("bench", help="Run all five treatments and rank them")
    _add_experiment_args(bench, treatment=False)

    rank = sub.add_parser("rank", help="Recompute medians and ranks from results.csv")
    rank.add_argument("--results", type=Path, required=True, help="A results.csv file")
    rank.add_argument("--out", type=Path, help="Output directory (default: beside results)")
    rank.add_argument("--seeds", help="Only use these seeds")
    rank.add_argument("--n-boot", type=int, default=1000, help="Bootstrap replicates")

    filters = sub.add_parser("filters", help="Write filtered training sets")
    filters.add_argument("--train", type=Path, required=True, help="Training CSV")
    filters.add_argument(
        "--filter",
        action="append",
        choices=[f.value for f in FilterName],
        help="Filter to apply (repeatable; default: all)",
    )
    filters.add_argument(
        "--config", type=Path, help="JSON config; only its farsec and clni sections are used"
    )
    filters.add_argument("--project", help="Project label (default: train file stem)")
    filters.add_argument("--out", type=Path, default=Path("out"), help="Output directory")
    return parser


def config_from_args(args: argparse.Namespace, treatments: list[str]) -> ExperimentConfig:
    overrides = {
        "train": args.train,
        "test": args.test,
        "project": args.project,
        "filter": args.filter,
        "treatments": treatments or None,
        "goal": args.goal,
        "seeds": parse_seeds(args.seeds) if args.seeds else None,
        "optimizer": args.optimizer,
        "epsilon": args.epsilon,
        "n1": args.n1,
        "n2": args.n2,
        "np": args.np,
        "iters": args.iters,
        "out": args.out,
        "jobs": args.jobs,
        "timing": False if args.no_timing else None,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if args.config is not None:
        return ExperimentConfig.from_json(args.config, **overrides)
    for required in ("train", "test"):
        if required not in overrides:
            raise ConfigError(f"--{required} is required without --config")
    return ExperimentConfig.model_validate(overrides)


def _print_summary(report: Report, goal: str) -> None:
    print(report.medians().to_string(index=False))
    print(f"rank 1 on {goal}: {', '.join(report.winners(goal))}")


def run(args: argparse.Namespace) -> int:
    if args.verb == "tune":
        cfg = config_from_args(args, [args.treatment] if args.treatment else [])
        report = run_experiment(cfg)
        _print_summary(report, cfg.goal.value)
        print(f"wrote report to {cfg.out}")
    elif args.verb == "bench":
        cfg = config_from_args(args, [t.value for t in Treatment])
        report = run_experiment(cfg)
        _print_summary(report, cfg.goal.value)
        print(f"wrote report to {cfg.out}")
    elif args.verb == "rank":
        seeds = parse_seeds(args.seeds) if args.seeds else None
        report = read_results(args.results, n_boot=args.n_boot, seeds=seeds)
        out = args.out or args.results.parent
        for path in write_rankings(report, out):
            print(f"wrote {path}")
    elif args.verb == "filters":
        names = args.filter or [f.value for f in FilterName]
        farsec, clni = filter_params_from_json(args.config) if args.config else (None, None)
        paths = export_filters(
            args.train, names, args.out, farsec=farsec, clni=clni, project=args.project or ""
        )
        for path in paths:
            print(f"wrote {path}")
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except (ConfigError, PydanticValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DualtuneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
