"""Command line: ``run`` an experiment, ``inspect`` an artifact, summarize ``stats``."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig
from .harness import STAGES, PipelineError, export, run_experiment
from .it import ObjectRepository
from .pgm import read_pgm
from .v1 import load_iom
from .v4 import FeatureRepository, load_map_csv

OUT_ENV = "CORTEXWAVES_OUT"


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    for f in dataclasses.fields(ExperimentConfig):
        flag = "--" + f.name.replace("_", "-")
        if isinstance(f.default, bool):
            parser.add_argument(flag, dest=f.name, action=argparse.BooleanOptionalAction,
                                default=None)
        else:
            parser.add_argument(flag, dest=f.name, default=None, metavar="VALUE")


def _build_config(args) -> ExperimentConfig:
    overrides = {}
    for f in dataclasses.fields(ExperimentConfig):
        value = getattr(args, f.name)
        if value is None:
            continue
        overrides[f.name] = value if isinstance(value, bool) else ExperimentConfig.coerce(f.name, value)
    if args.config:
        return ExperimentConfig.load(args.config, **overrides)
    return ExperimentConfig(**overrides)


def cmd_run(args) -> int:
    try:
        config = _build_config(args)
    except (ConfigError, OSError) as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return STAGES["config"]
    out = args.out or os.environ.get(OUT_ENV) or "cortexwaves-out"
    report = run_experiment(config)
    try:
        files = export(report, out)
    except PipelineError as exc:
        print(f"error {exc}", file=sys.stderr)
        return exc.exit_code
    if report.error is not None:
        print(f"error {report.error}", file=sys.stderr)
        return report.error.exit_code
    decisions = [r.decision for r in report.records]
    print(f"{len(decisions)} stimuli: "
          + ", ".join(f"{decisions.count(d)} {d}" for d in ("stored", "novel", "recognized")))
    print(f"{len(report.features)} features, {len(report.objects)} objects; "
          f"{len(files)} files written to {out}")
    return 0


def _describe_grid(grid: np.ndarray) -> str:
    nz = np.count_nonzero(grid)
    return (f"{grid.shape[0]}x{grid.shape[1]} grid, min {grid.min()!r}, max {grid.max()!r}, "
            f"{nz} nonzero")


def cmd_inspect(args) -> int:
    path = Path(args.path)
    try:
        if path.suffix.lower() in (".pgm", ".pnm"):
            samples, maxval = read_pgm(path)
            print(f"graymap {samples.shape[1]}x{samples.shape[0]}, maxval {maxval}")
            levels, counts = np.unique(samples, return_counts=True)
            for lv, c in zip(levels, counts):
                print(f"  level {lv}: {c}")
            return 0
        text = path.read_text(encoding="ascii")
        head = text.split("\n", 1)[0]
        if head.startswith("# novelty_fraction"):
            repo = FeatureRepository.from_text(text)
            print(f"feature repository: {len(repo)} prototypes ({head.lstrip('# ')})")
            print("  id  vector             dist  beta        tau  born  survived")
            for p in repo.prototypes:
                vec = "".join(str(v) for v in p.vector)
                print(f"  {p.id:<3d} {vec:<18s} {p.dist_v4:<5d} {p.beta_v4:<11.6g} "
                      f"{p.tau:<4d} {p.born:<5d} {p.survived}")
        elif head.startswith("# alpha"):
            repo = ObjectRepository.from_text(text)
            print(f"object repository: {len(repo)} objects ({head.lstrip('# ')})")
            for obj in repo:
                ids = np.unique(obj.obj_map[obj.obj_map > 0])
                print(f"  object {obj.id}: {obj.obj_map.shape[0]}x{obj.obj_map.shape[1]}, "
                      f"dist_it {obj.dist_it}, beta_it {obj.beta_it:.4g}, "
                      f"{np.count_nonzero(obj.obj_map)} nonzero entries, {len(ids)} distinct features")
        elif path.suffix == ".csv":
            grid = load_map_csv(path)
            print(_describe_grid(grid))
            if args.full:
                print(text, end="")
        else:
            iom = load_iom(path)
            counts = np.bincount(iom.ravel(), minlength=5)
            print(f"IOM {iom.shape[0]}x{iom.shape[1]}, code counts "
                  + ", ".join(f"{k}:{c}" for k, c in enumerate(counts)))
            if args.full:
                print(text, end="")
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot inspect {path}: {exc}", file=sys.stderr)
        return 1
    return 0


def _read_csv(path: Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def cmd_stats(args) -> int:
    root = Path(args.dir)
    try:
        outcomes = _read_csv(root / "outcomes.csv")
        waves = _read_csv(root / "waves.csv")
        survival = _read_csv(root / "survival.csv")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    fired: dict[str, dict[int, int]] = {}
    for row in waves:
        fired.setdefault(row["stimulus"], {})[int(row["step"])] = int(row["fired"])
    print("stimulus  decision    object  maX        steps  early  fired@2/total")
    for row in outcomes:
        f = fired.get(row["stimulus"], {})
        total = max(f.values()) if f else 0
        print(f"{row['stimulus']:>8}  {row['decision']:<10}  {row['object_id']:>6}  "
              f"{float(row['max_response']):<9.3g}  {row['steps']:>5}  {row['terminated_early']:>5}  "
              f"{f.get(2, total)}/{total}")
    print()
    print("stimulus  before  survived  cohort  rate")
    for row in survival:
        print(f"{row['stimulus']:>8}  {row['before']:>6}  {row['survived']:>8}  {row['cohort']:>6}  "
              f"{float(row['rate']):.3f}")
    per_epoch: dict[str, int] = {}
    for row in outcomes:
        per_epoch[row["epoch"]] = per_epoch.get(row["epoch"], 0) + int(row["disposed"])
    print()
    for epoch, n in per_epoch.items():
        print(f"epoch {epoch}: {n} features disposed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cortexwaves", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and export its artifacts")
    run.add_argument("--config", help="key=value config file; flags override it")
    run.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./cortexwaves-out)")
    _add_config_flags(run)
    run.set_defaults(func=cmd_run)

    insp = sub.add_parser("inspect", help="summarize a repository, map, IOM or graymap file")
    insp.add_argument("path")
    insp.add_argument("--full", action="store_true", help="also print the raw grid")
    insp.set_defaults(func=cmd_inspect)

    st = sub.add_parser("stats", help="survival and acceleration summaries of a run directory")
    st.add_argument("dir")
    st.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
