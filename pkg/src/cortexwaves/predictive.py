"""Predictive coding between V4 and IT.

The first wave yields an initial hypothesis (the stored object with the
highest pooled IT response). Tiles of the stimulus whose feature agrees with
the hypothesis and that have not fired yet are amplified so that they join
the next wave. The loop repeats, re-choosing the hypothesis on the growing
cumulative map, until the waves run out or a coherent hypothesis is
confirmed early.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .it import Decision, ObjectRepository, recognize, response_grid
from .waves import WaveSchedule

__all__ = [
    "StepRecord",
    "HypothesisState",
    "Outcome",
    "initial_hypothesis",
    "evaluate_hypotheses",
    "match_identical",
    "amplify",
    "coherence",
    "refine",
    "predictive_coding",
]


@dataclass
class StepRecord:
    """What IT saw after one wave, and the top-down reply that followed it."""

    step: int
    hypothesis: int
    max_response: float
    per_object: tuple[float, ...]
    wave_size: int
    fired: int
    promoted: int = 0
    coherent: bool = False
    promotion: frozenset = frozenset()
    cumulative: np.ndarray | None = field(default=None, repr=False)


@dataclass
class HypothesisState:
    hypothesis_id: int | None = None
    history: list[StepRecord] = field(default_factory=list)
    coherent: bool = False
    terminated_early: bool = False

    @property
    def max_response(self) -> float:
        return self.history[-1].max_response if self.history else 0.0

    @property
    def steps(self) -> int:
        return len(self.history)


@dataclass
class Outcome:
    decision: Decision
    object_id: int | None
    max_response: float
    state: HypothesisState
    schedule: WaveSchedule


def evaluate_hypotheses(objects: ObjectRepository, cumulative, radius: int = 5):
    """Pooled response of every stored object; returns ``(winner, maX, per_object)``.

    Ties go to the lowest object id.
    """
    if not len(objects):
        raise ValueError("no stored objects to form a hypothesis from")
    per_object = tuple(response_grid(obj, cumulative, radius, objects.indicator_metric).max
                       for obj in objects)
    k = int(np.argmax(per_object))
    return k + 1, per_object[k], per_object


def initial_hypothesis(objects: ObjectRepository, first_wave, radius: int = 5) -> tuple[int, float]:
    """Object id and maX pooled over the first-wave input."""
    oid, top, _ = evaluate_hypotheses(objects, first_wave, radius)
    return oid, top


def match_identical(stimulus_fmap, hyp_map, fired) -> np.ndarray:
    """Tiles where stimulus and hypothesis carry the same nonzero feature, minus fired ones."""
    stimulus_fmap = np.asarray(stimulus_fmap)
    hyp_map = np.asarray(hyp_map)
    fired = np.asarray(fired, dtype=bool)
    if not stimulus_fmap.shape == hyp_map.shape == fired.shape:
        raise ValueError("stimulus map, hypothesis map and fired mask must align")
    return (stimulus_fmap == hyp_map) & (stimulus_fmap != 0) & ~fired


def amplify(schedule: WaveSchedule, promotion) -> WaveSchedule:
    return schedule.amplify(promotion)


def coherence(promoted: int, unfired_nonzero: int, threshold: float = 0.5) -> bool:
    """A hypothesis is coherent when it promotes at least ``threshold`` of what is still pending."""
    if unfired_nonzero < 0 or promoted < 0:
        raise ValueError("counts must be non-negative")
    return unfired_nonzero > 0 and promoted / unfired_nonzero >= threshold


def _record(state, schedule, step_fired_before, objects, cumulative, radius):
    oid, top, per_object = evaluate_hypotheses(objects, cumulative, radius)
    fired = int(schedule.fired.sum())
    state.hypothesis_id = oid
    state.history.append(StepRecord(schedule.current_step, oid, top, per_object,
                                    fired - step_fired_before, fired, cumulative=cumulative))


def refine(state: HypothesisState, schedule: WaveSchedule, fmap, objects: ObjectRepository,
           radius: int = 5, alpha: float = 0.67, coherence_threshold: float = 0.5,
           feedback: bool = True) -> Decision:
    """Iterative refinement from the current hypothesis until the waves are spent.

    Each round matches the stimulus against the hypothesis, amplifies the
    agreeing pending tiles, delivers the next wave and re-chooses the
    hypothesis. A round that was coherent and ends with maX >= alpha stops
    the loop early. Amplifications are never rolled back.
    """
    if state.hypothesis_id is None or not state.history:
        raise ValueError("generate the initial hypothesis before refining")
    fmap = np.asarray(fmap)
    while True:
        last = state.history[-1]
        coherent = False
        if feedback and not schedule.exhausted:
            fired = schedule.fired
            promotion = match_identical(fmap, objects[state.hypothesis_id].obj_map, fired)
            pending = int(np.count_nonzero((fmap != 0) & ~fired))
            coherent = coherence(int(promotion.sum()), pending, coherence_threshold)
            schedule.amplify(promotion)
            last.promoted = int(promotion.sum())
            last.promotion = frozenset(map(tuple, np.argwhere(promotion).tolist()))
            last.coherent = coherent
            state.coherent = coherent
        if schedule.exhausted:
            break
        before = int(schedule.fired.sum())
        cumulative, _ = schedule.advance(fmap)
        _record(state, schedule, before, objects, cumulative, radius)
        if coherent and state.max_response >= alpha:
            state.terminated_early = True
            break
    return recognize(state.max_response, alpha)


def predictive_coding(fmap, rmap, objects: ObjectRepository, epsilon: float = 0.1,
                      radius: int = 5, alpha: float = 0.67, coherence_threshold: float = 0.5,
                      feedback: bool = True) -> Outcome:
    """Band the response map, form the initial hypothesis from wave 1 and refine it."""
    schedule = WaveSchedule(rmap, epsilon)
    if np.asarray(fmap).shape != schedule.shape:
        raise ValueError("feature and response maps must align")
    state = HypothesisState()
    first_wave, _ = schedule.advance(fmap)
    _record(state, schedule, 0, objects, first_wave, radius)
    decision = refine(state, schedule, fmap, objects, radius, alpha, coherence_threshold, feedback)
    oid = state.hypothesis_id if decision is Decision.RECOGNIZED else None
    return Outcome(decision, oid, state.max_response, state, schedule)
