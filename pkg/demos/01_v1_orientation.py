"""V1: four Gabor filters compete for every retinal location.

A small bar is rotated through the four preferred orientations. At the
middle of the bar the winning code follows the rotation, and the blank
code 0 marks places where nothing is strong enough to report.
"""
import numpy as np

from cortexwaves.retina import ShapeSpec, generate_synthetic
from cortexwaves.v1 import gabor_bank, gabor_kernel, integrate

GLYPHS = " -/|\\"  # code 0..4 -> blank, 0, 45, 90, 135 degrees


def show(iom, rows, cols):
    for r in range(*rows):
        print("   " + "".join(GLYPHS[c] for c in iom[r, cols[0]:cols[1]]))


k = gabor_kernel(0)
print("0-degree kernel (rows are x, columns y):")
print(np.array2string(k.weights, precision=2, suppress_small=True))
print()

bank = gabor_bank()
for theta in (0, 45, 90, 135):
    retina = generate_synthetic(ShapeSpec("bar", theta=theta, width=3, scale=0.5))
    iom = integrate(retina, bank)
    counts = np.bincount(iom.ravel(), minlength=5)
    print(f"bar at {theta:3d} deg: centre code {iom[47, 47]}, code counts {counts.tolist()}")
    show(iom, (35, 60), (30, 65))
    print()
