"""Experiment orchestration: the full V1 -> V4 -> waves -> IT loop over a stimulus list."""
from __future__ import annotations

import contextlib
import hashlib
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import development
from .config import CATALOG_KEYWORD, ExperimentConfig
from .development import Disposal, SurvivalReport
from .it import ObjectRepository, response_grid
from .predictive import StepRecord, predictive_coding
from .retina import CATALOG, Retina, generate_synthetic, load_stimulus, parse_shape, save_stimulus
from .v1 import dump_iom, gabor_bank, integrate
from .v4 import FeatureRepository, build_maps, save_map_csv
from .waves import WaveSchedule

__all__ = ["PipelineError", "StimulusRecord", "RunReport", "resolve_stimuli", "stimulus_seeds",
           "run_experiment", "export", "STAGES"]

log = logging.getLogger(__name__)

# stage name -> process exit code
STAGES = {
    "config": 2,
    "retina": 3,
    "v1": 4,
    "v4": 5,
    "waves": 6,
    "it": 7,
    "predictive": 8,
    "development": 9,
    "export": 10,
}


class PipelineError(RuntimeError):
    def __init__(self, stage: str, stimulus: int | None, message: str):
        where = f" at stimulus {stimulus}" if stimulus is not None else ""
        super().__init__(f"[{stage}]{where}: {message}")
        self.stage = stage
        self.stimulus = stimulus

    @property
    def exit_code(self) -> int:
        return STAGES.get(self.stage, 1)


@contextlib.contextmanager
def _stage(name: str, stimulus: int | None):
    try:
        yield
    except PipelineError:
        raise
    except (ValueError, KeyError, RuntimeError, OSError) as exc:
        raise PipelineError(name, stimulus, str(exc)) from exc


@dataclass
class StimulusRecord:
    """Everything produced while processing one stimulus presentation."""

    index: int
    epoch: int
    name: str
    retina: Retina
    iom: np.ndarray
    fmap: np.ndarray
    rmap: np.ndarray
    decision: str
    object_id: int
    hypothesis: int | None
    max_response: float
    steps: list[StepRecord]
    terminated_early: bool
    # grids[s][k]: response grid values of object k+1 after step s+1
    grids: list[list[np.ndarray]] = field(default_factory=list)
    disposal: Disposal | None = None
    features_after_growth: int = 0


@dataclass
class RunReport:
    config: ExperimentConfig
    records: list[StimulusRecord] = field(default_factory=list)
    survival: SurvivalReport = field(default_factory=SurvivalReport)
    features: FeatureRepository | None = None
    objects: ObjectRepository | None = None
    error: PipelineError | None = None

    def outcome_rows(self):
        yield ("stimulus", "epoch", "name", "decision", "object_id", "hypothesis",
               "max_response", "steps", "terminated_early", "features", "disposed")
        for r in self.records:
            yield (r.index, r.epoch, r.name, r.decision, r.object_id,
                   "" if r.hypothesis is None else r.hypothesis, repr(r.max_response),
                   len(r.steps), int(r.terminated_early), r.features_after_growth,
                   len(r.disposal.disposed) if r.disposal else 0)

    def wave_rows(self):
        yield ("stimulus", "step", "wave_size", "fired")
        for r in self.records:
            for s in r.steps:
                yield (r.index, s.step, s.wave_size, s.fired)

    def refinement_rows(self):
        yield ("stimulus", "step", "hypothesis", "max_response", "promoted", "coherent", "fired")
        for r in self.records:
            if r.decision == "stored" and r.hypothesis is None:
                continue
            for s in r.steps:
                yield (r.index, s.step, s.hypothesis, repr(s.max_response), s.promoted,
                       int(s.coherent), s.fired)

    def disposed_per_epoch(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.records:
            out[r.epoch] = out.get(r.epoch, 0) + (len(r.disposal.disposed) if r.disposal else 0)
        return out


def resolve_stimuli(config: ExperimentConfig) -> list[tuple[str, object]]:
    """Expand the stimulus list into ``(name, ShapeSpec | path)`` pairs."""
    out = []
    for token in config.stimuli:
        if token == CATALOG_KEYWORD:
            out.extend((spec.token(), spec) for spec in CATALOG)
        elif token.lower().endswith((".pgm", ".pnm")):
            out.append((token, Path(token)))
        else:
            out.append((token, parse_shape(token)))
    return out


def stimulus_seeds(seed: int, count: int) -> list[int]:
    """Per-position generation seeds, all derived from the one config seed."""
    return [int(v) for v in np.random.SeedSequence(seed).generate_state(count)]


def _bootstrap_steps(fmap, rmap, epsilon) -> list[StepRecord]:
    """Wave delivery with no IT objects to form hypotheses from."""
    schedule = WaveSchedule(rmap, epsilon)
    steps = []
    while not schedule.exhausted:
        before = int(schedule.fired.sum())
        cumulative, _ = schedule.advance(fmap)
        fired = int(schedule.fired.sum())
        steps.append(StepRecord(schedule.current_step, 1, 0.0, (), fired - before, fired,
                                cumulative=cumulative))
    return steps


def run_experiment(config: ExperimentConfig, raise_errors: bool = False) -> RunReport:
    """Process every stimulus in order, ``config.epochs`` times over.

    Per stimulus: V1 -> IOM -> V4 maps (growing) -> waves -> either the
    bootstrap store (empty IT) or predictive coding followed by a store when
    novel -> disposal, substitution and a survival row.
    """
    report = RunReport(config)
    features = FeatureRepository(config.novelty_fraction, config.var_fraction, config.global_beta)
    objects = ObjectRepository(config.alpha, config.indicator_metric)
    report.features, report.objects = features, objects
    try:
        with _stage("config", None):
            stimuli = resolve_stimuli(config)
            bank = gabor_bank(config.sigma, config.wavelength, config.gamma,
                              config.kernel_size, config.zero_mean)
            seeds = stimulus_seeds(config.seed, len(stimuli))
        index = 0
        for epoch in range(1, config.epochs + 1):
            for position, (name, source) in enumerate(stimuli):
                index += 1
                report.records.append(
                    _process(config, bank, features, objects, report.survival,
                             index, epoch, name, source, seeds[position]))
    except PipelineError as exc:
        log.error("%s", exc)
        report.error = exc
        if raise_errors:
            raise
    return report


def _process(config, bank, features, objects, survival, index, epoch, name, source, seed):
    with _stage("retina", index):
        if isinstance(source, Path):
            retina = load_stimulus(source, (config.height, config.width), config.resize,
                                   config.kernel_size)
        else:
            retina = generate_synthetic(source, seed, (config.height, config.width))
    with _stage("v1", index):
        iom = integrate(retina, bank, config.blank_fraction)
    with _stage("v4", index):
        fmap, rmap = build_maps(iom, features, grow=True, stride=config.stride, stimulus=index)
        grown = len(features)

    hypothesis = None
    terminated = False
    if not len(objects):
        with _stage("it", index):
            oid = objects.store(fmap)
        with _stage("waves", index):
            steps = _bootstrap_steps(fmap, rmap, config.epsilon)
        decision, top = "stored", 1.0
    else:
        with _stage("predictive", index):
            outcome = predictive_coding(fmap, rmap, objects, config.epsilon, config.radius,
                                        config.alpha, config.coherence_threshold, config.feedback)
        steps = outcome.state.history
        hypothesis = outcome.state.hypothesis_id
        terminated = outcome.state.terminated_early
        top = outcome.max_response
        with _stage("it", index):
            if outcome.object_id is None:
                decision, oid = "novel", objects.store(fmap)
            else:
                decision, oid = "recognized", outcome.object_id
    with _stage("it", index):
        grids = [[response_grid(obj, s.cumulative, config.radius, config.indicator_metric).values
                  for obj in objects] for s in steps]

    with _stage("development", index):
        first = index if survival.first_stimulus is None else survival.first_stimulus
        cohort_before = sum(1 for p in features.prototypes if p.born == first)
        disposal = development.dispose(features, index, config.reset_counters)
        development.substitute(objects, disposal, features)
        development.record_survival(survival, index, disposal, features, cohort_before)
    log.info("stimulus %d (%s): %s object %d, %d steps, %d/%d features survived",
             index, name, decision, oid, len(steps), len(features), disposal.before)
    return StimulusRecord(index, epoch, name, retina, iom, fmap, rmap, decision, oid, hypothesis,
                          top, steps, terminated, grids, disposal, grown)


# --- export ------------------------------------------------------------------

def _write_csv(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")


def export(report: RunReport, out_dir: str | os.PathLike) -> list[Path]:
    """Write every artifact of a run under ``out_dir`` plus a sha256 manifest.

    Returns the written paths relative to ``out_dir``, manifest last.
    """
    out = Path(out_dir)
    written: list[Path] = []

    def emit(rel: str, writer):
        path = out / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        writer(path)
        written.append(Path(rel))

    with _stage("export", None):
        out.mkdir(parents=True, exist_ok=True)
        emit("config.txt", report.config.save)
        emit("outcomes.csv", lambda p: _write_csv(p, report.outcome_rows()))
        emit("waves.csv", lambda p: _write_csv(p, report.wave_rows()))
        emit("refinement.csv", lambda p: _write_csv(p, report.refinement_rows()))
        emit("survival.csv", report.survival.save)
        emit("features.txt", report.features.save)
        emit("objects.txt", report.objects.save)
        for r in report.records:
            d = f"stimuli/{r.index:03d}"
            emit(f"{d}/retina.pgm", lambda p, r=r: save_stimulus(p, r.retina))
            emit(f"{d}/iom.txt", lambda p, r=r: dump_iom(p, r.iom))
            emit(f"{d}/feature_map.csv", lambda p, r=r: save_map_csv(p, r.fmap))
            emit(f"{d}/response_map.csv", lambda p, r=r: save_map_csv(p, r.rmap))
            prev = np.zeros(r.fmap.shape, dtype=bool)
            for s, grids in zip(r.steps, r.grids):
                now = np.asarray(s.cumulative) != 0
                emit(f"{d}/wave_{s.step:02d}.csv",
                     lambda p, w=now & ~prev: save_map_csv(p, w.astype(np.int64)))
                prev = now
                for k, g in enumerate(grids, start=1):
                    emit(f"{d}/grid_step{s.step:02d}_obj{k:02d}.csv",
                         lambda p, g=g: save_map_csv(p, g))
            if r.disposal is not None:
                emit(f"remaps/{r.index:03d}.csv", lambda p, r=r: _write_csv(
                    p, [("old_id", "new_id", "disposed", "substitute")] + list(r.disposal.rows())))
        if report.error is not None:
            emit("error.txt", lambda p: p.write_text(
                f"stage={report.error.stage}\nstimulus={report.error.stimulus}\n{report.error}\n"))

        lines = []
        for rel in written:
            digest = hashlib.sha256((out / rel).read_bytes()).hexdigest()
            lines.append(f"{digest}  {rel.as_posix()}")
        (out / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="ascii")
        written.append(Path("manifest.txt"))
    return written
