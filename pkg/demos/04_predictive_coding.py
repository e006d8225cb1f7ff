"""Predictive coding: a familiar picture arrives as a tsunami of spikes.

Object A is stored. When A is shown again the first wave already points at
A, so every pending tile that agrees with A is amplified into wave 2 and
recognition ends after two steps. Without feedback the same stimulus has to
wait for all its bands. A stimulus built from features A never uses finds
nothing to amplify and is declared novel.
"""
import numpy as np

from cortexwaves.it import ObjectRepository
from cortexwaves.predictive import predictive_coding
from cortexwaves.retina import CATALOG, generate_synthetic
from cortexwaves.v1 import gabor_bank, integrate
from cortexwaves.v4 import FeatureRepository, build_maps


def trace(label, outcome):
    print(f"{label}: {outcome.decision.value} after {outcome.state.steps} steps"
          f"{' (early)' if outcome.state.terminated_early else ''}")
    for s in outcome.state.history:
        print(f"   step {s.step:2d}: fired {s.fired:4d}  maX {s.max_response:.3f}  "
              f"promoted {s.promoted:4d}  coherent {s.coherent}")


iom = integrate(generate_synthetic(CATALOG[0]), gabor_bank())
repo = FeatureRepository()
fmap, _ = build_maps(iom, repo, stimulus=1)
objects = ObjectRepository()
objects.store(fmap)
fmap, rmap = build_maps(iom, repo, grow=False)
print(f"A has {np.count_nonzero(fmap)} non-blank tiles\n")

trace("A again, feedback on", predictive_coding(fmap, rmap, objects))
trace("A again, feedback off", predictive_coding(fmap, rmap, objects, feedback=False))

foreign = np.where(fmap > 0, fmap + len(repo), 0)
trace("same layout, foreign features", predictive_coding(foreign, rmap, objects))
