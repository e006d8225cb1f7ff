"""Development of the feature dictionary: usage-based disposal and object repair.

After each stimulus, features used no more often than chance (relative
frequency <= 1/F) are dropped, the survivors are renumbered densely, and
every stored object has its disposed features replaced by the nearest
surviving one.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .it import ObjectRepository
from .v4 import FeatureRepository

__all__ = [
    "Disposal",
    "SurvivalRow",
    "SurvivalReport",
    "relative_frequency",
    "chance_level_mask",
    "dispose",
    "substitute",
    "record_survival",
]


def relative_frequency(taus) -> np.ndarray:
    """fr_i = tau_i / sum(tau)."""
    taus = np.asarray(taus, dtype=np.int64)
    if taus.size == 0:
        raise ValueError("no features")
    if taus.min() < 0:
        raise ValueError("counters are non-negative")
    total = taus.sum()
    if total == 0:
        raise ValueError("all usage counters are zero")
    return taus / total


def chance_level_mask(taus) -> np.ndarray:
    """Features at or below chance: tau_i / sum <= 1/F, compared in integers."""
    taus = np.asarray(taus, dtype=np.int64)
    relative_frequency(taus)  # validation
    return taus * len(taus) <= taus.sum()


@dataclass
class Disposal:
    """One disposal round.

    ``remap`` sends every old id to its new id (0 for disposed features);
    ``disposed_vectors`` keeps the removed RBF centres for substitution.
    """

    stimulus: int
    before: int
    survived: list[int]
    disposed: list[int]
    remap: dict[int, int]
    disposed_vectors: dict[int, tuple[int, ...]]
    guarded: bool = False
    substitutions: dict[int, int] = field(default_factory=dict)

    def rows(self):
        """(old id, new id, disposed flag, substitute new id) for every pre-disposal feature."""
        for old in range(1, self.before + 1):
            new = self.remap[old]
            yield old, new, int(new == 0), self.substitutions.get(old, new)


def dispose(repo: FeatureRepository, stimulus: int = 0, reset_counters: bool = False) -> Disposal:
    """Drop chance-level features and renumber the survivors in order.

    If every feature sits at chance (uniform usage) the most used one,
    lowest id first, is kept so the dictionary never empties.
    """
    if not len(repo):
        raise ValueError("empty feature repository")
    taus = repo.taus
    low = chance_level_mask(taus)
    guarded = bool(low.all())
    if guarded:
        keep = int(np.argmax(taus))  # first maximum = lowest id
        low[keep] = False
    survivors = [p for p, drop in zip(repo.prototypes, low) if not drop]
    disposal = Disposal(
        stimulus=stimulus,
        before=len(repo),
        survived=[p.id for p in survivors],
        disposed=[p.id for p, drop in zip(repo.prototypes, low) if drop],
        remap={p.id: 0 for p in repo.prototypes},
        disposed_vectors={p.id: p.vector for p, drop in zip(repo.prototypes, low) if drop},
        guarded=guarded,
    )
    for new_id, p in enumerate(survivors, start=1):
        disposal.remap[p.id] = new_id
        p.id = new_id
        p.survived += 1
        if reset_counters:
            p.tau = 0
    repo.prototypes = survivors
    repo.invalidate()
    return disposal


def substitute(objects: ObjectRepository, disposal: Disposal, repo: FeatureRepository) -> ObjectRepository:
    """Rewrite stored objects against the post-disposal dictionary.

    Surviving ids follow the remap; a disposed id becomes the surviving
    feature whose vector is nearest to the disposed one (lowest id on ties).
    Zeros stay zeros.
    """
    if not len(repo):
        raise ValueError("no surviving features to substitute with")
    lut = np.zeros(disposal.before + 1, dtype=np.int64)
    for old, new in disposal.remap.items():
        lut[old] = new
    for old, vec in disposal.disposed_vectors.items():
        d = ((repo.vectors - np.asarray(vec)) ** 2).sum(axis=1)
        lut[old] = int(np.argmin(d)) + 1
        disposal.substitutions[old] = int(lut[old])
    for obj in list(objects):
        if obj.obj_map.max() > disposal.before:
            raise ValueError(f"object {obj.id} references unknown feature ids")
        objects.replace_map(obj.id, lut[obj.obj_map])
    return objects


@dataclass(frozen=True)
class SurvivalRow:
    stimulus: int
    before: int
    survived: int
    cohort: int
    rate: float
    cohort_before: int


@dataclass
class SurvivalReport:
    """Per-stimulus survival statistics; ``first_stimulus`` fixes the tracked cohort."""

    first_stimulus: int | None = None
    rows: list[SurvivalRow] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["stimulus,before,survived,cohort,rate,cohort_before"]
        for r in self.rows:
            lines.append(f"{r.stimulus},{r.before},{r.survived},{r.cohort},{r.rate!r},{r.cohort_before}")
        return "\n".join(lines) + "\n"

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_csv())


def record_survival(report: SurvivalReport, stimulus: int, disposal: Disposal,
                    repo: FeatureRepository, cohort_before: int) -> SurvivalReport:
    """Append the row for ``stimulus``; call once per stimulus after disposal.

    ``cohort_before`` is the number of first-stimulus features alive before
    this disposal round.
    """
    if any(r.stimulus == stimulus for r in report.rows):
        raise ValueError(f"stimulus {stimulus} already recorded")
    if report.first_stimulus is None:
        report.first_stimulus = stimulus
    cohort = sum(1 for p in repo.prototypes if p.born == report.first_stimulus)
    survived = len(repo)
    report.rows.append(SurvivalRow(stimulus, disposal.before, survived, cohort,
                                   survived / disposal.before, cohort_before))
    return report
