"""Waves of spikes carry a stimulus to IT, strongest matches first.

The Response Map is cut into activation bands of width 0.1. Wave 1 holds
the perfect matches; each later wave adds the next band. A stored object's
IT unit sees the cumulative map grow and its pooled response climb.
"""
import numpy as np

from cortexwaves.it import ObjectRepository, response_grid
from cortexwaves.retina import CATALOG, generate_synthetic
from cortexwaves.v1 import gabor_bank, integrate
from cortexwaves.v4 import FeatureRepository, build_maps
from cortexwaves.waves import WaveSchedule

bank = gabor_bank()
repo = FeatureRepository()
fmap, rmap = build_maps(integrate(generate_synthetic(CATALOG[0]), bank), repo, stimulus=1)
objects = ObjectRepository()
objects.store(fmap)
obj = objects[1]
print(f"object 1 stored: dist_IT = {obj.dist_it}, beta_IT = {obj.beta_it:.3e}")

schedule = WaveSchedule(rmap)
print("\nstep  wave size  fired  maX    best offset (dx, dy)")
while not schedule.exhausted:
    before = int(schedule.fired.sum())
    cumulative, _ = schedule.advance(fmap)
    grid = response_grid(obj, cumulative)
    print(f"{schedule.current_step:4d}  {int(schedule.fired.sum()) - before:9d}  "
          f"{int(schedule.fired.sum()):5d}  {grid.max:.3f}  {grid.argmax}")

shifted = np.roll(fmap, (2, -3), axis=(0, 1))
g = response_grid(obj, shifted)
print(f"\nthe same picture shifted by 2 rows and -3 columns peaks at offset {g.argmax} "
      f"with maX {g.max:.3f}")
