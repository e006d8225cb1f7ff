"""V4: a dictionary of 3x3 orientation patches grows from scratch.

The first hand picture is tiled into 31x31 receptive fields. Every tile far
enough from what is already stored becomes a new feature, then each tile is
labelled by its best matching feature and the strength of that match.
"""
import numpy as np

from cortexwaves.retina import CATALOG, generate_synthetic
from cortexwaves.v1 import gabor_bank, integrate
from cortexwaves.v4 import FeatureRepository, build_maps

iom = integrate(generate_synthetic(CATALOG[0]), gabor_bank())
repo = FeatureRepository()
fmap, rmap = build_maps(iom, repo, stimulus=1)

print(f"{np.count_nonzero(fmap)} of {fmap.size} tiles carry an orientation pattern")
print(f"{len(repo)} features admitted; most used:")
for p in sorted(repo.prototypes, key=lambda p: -p.tau)[:6]:
    patch = np.array(p.vector).reshape(3, 3)
    print(f"  feature {p.id:3d}  used {p.tau:3d}x  beta {p.beta_v4:.4f}  rows {patch.tolist()}")

hist, edges = np.histogram(rmap[rmap > 0], bins=[0, 0.2, 0.4, 0.6, 0.8, 0.9999, 1.0])
print("\nresponse levels of the non-blank tiles:")
for n, lo, hi in zip(hist, edges, edges[1:]):
    print(f"  {lo:.1f}-{hi:.4g}: {n}")

print("\nfeature map (ids mod 10, '.' = blank), rows 8-22:")
for row in fmap[8:23]:
    print("   " + "".join("." if v == 0 else str(v % 10) for v in row))
