"""V1 simple cells: a four-orientation Gabor bank with winner-take-all inhibition.

Kernel arrays are indexed ``[x, y]`` with ``x`` running down the rows, so the
0 degree kernel oscillates vertically and prefers horizontal bars, and the
90 degree kernel is its transpose.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .retina import Retina

__all__ = [
    "ORIENTATIONS",
    "GaborKernel",
    "gabor_kernel",
    "gabor_bank",
    "filter_response",
    "convolve",
    "inhibit",
    "integrate",
    "dump_iom",
    "load_iom",
]

# orientation code k (1..4) <-> ORIENTATIONS[k - 1] degrees
ORIENTATIONS = (0.0, 45.0, 90.0, 135.0)


@dataclass(frozen=True, eq=False)
class GaborKernel:
    weights: np.ndarray
    theta: float
    sigma: float
    wavelength: float
    gamma: float

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def code(self) -> int:
        """Orientation code 1..4, or 0 for an off-grid angle."""
        t = self.theta % 180.0
        for k, o in enumerate(ORIENTATIONS, start=1):
            if abs(t - o) < 1e-9:
                return k
        return 0


def gabor_kernel(theta: float, sigma: float = 2.8, wavelength: float = 3.5,
                 gamma: float = 0.3, size: int = 7, zero_mean: bool = False) -> GaborKernel:
    """Sample exp(-(x0^2 + g^2 y0^2) / 2s^2) * cos(2 pi x0 / l) on a centred grid.

    With ``zero_mean`` the kernel is shifted to zero mean and scaled to unit
    L2 norm; by default the raw samples are returned (center weight 1).
    """
    if size < 1 or size % 2 == 0:
        raise ValueError(f"kernel size must be odd, got {size}")
    if sigma <= 0 or wavelength <= 0:
        raise ValueError("sigma and wavelength must be positive")
    half = (size - 1) // 2
    x, y = np.mgrid[-half:half + 1, -half:half + 1].astype(float)
    t = np.deg2rad(theta)
    x0 = x * np.cos(t) + y * np.sin(t)
    y0 = -x * np.sin(t) + y * np.cos(t)
    w = np.exp(-(x0 ** 2 + gamma ** 2 * y0 ** 2) / (2 * sigma ** 2)) * np.cos(2 * np.pi * x0 / wavelength)
    if zero_mean:
        w = w - w.mean()
        w = w / np.linalg.norm(w)
    w.setflags(write=False)
    return GaborKernel(w, float(theta), float(sigma), float(wavelength), float(gamma))


def gabor_bank(sigma: float = 2.8, wavelength: float = 3.5, gamma: float = 0.3,
               size: int = 7, zero_mean: bool = False) -> list[GaborKernel]:
    return [gabor_kernel(t, sigma, wavelength, gamma, size, zero_mean) for t in ORIENTATIONS]


def filter_response(image, kernel: GaborKernel) -> np.ndarray:
    """Signed valid-mode 2-D convolution of ``image`` with the kernel."""
    image = image.pixels if isinstance(image, Retina) else np.asarray(image, dtype=float)
    s = kernel.size
    if image.ndim != 2 or image.shape[0] < s or image.shape[1] < s:
        raise ValueError(f"image {image.shape} is smaller than the {s}x{s} kernel")
    windows = sliding_window_view(image, (s, s))
    # true convolution flips the kernel
    return np.einsum("ijkl,kl->ij", windows, kernel.weights[::-1, ::-1])


def convolve(retina, kernel: GaborKernel) -> np.ndarray:
    """Orientation map: rectified (absolute) filter response, shape (H-S+1, W-S+1)."""
    return np.abs(filter_response(retina, kernel))


def inhibit(maps, blank_threshold: float, codes=(1, 2, 3, 4)) -> np.ndarray:
    """Winner-take-all across orientation maps.

    Each location gets the code of its strongest response, lowest code on
    ties, or 0 when that response is below ``blank_threshold`` (or zero).
    """
    codes = tuple(int(c) for c in codes)
    if len(maps) != len(codes):
        raise ValueError("one orientation code per map is required")
    if len(set(codes)) != len(codes):
        raise ValueError(f"duplicate orientation codes {codes}")
    shapes = {np.shape(m) for m in maps}
    if len(shapes) != 1:
        raise ValueError(f"orientation maps differ in shape: {sorted(shapes)}")
    order = np.argsort(codes, kind="stable")
    stack = np.stack([np.asarray(maps[i], dtype=float) for i in order])
    sorted_codes = np.array(codes)[order]
    winner = np.argmax(stack, axis=0)
    peak = np.max(stack, axis=0)
    iom = sorted_codes[winner]
    iom[(peak < blank_threshold) | (peak <= 0)] = 0
    return iom.astype(np.int64)


def integrate(retina, bank: list[GaborKernel], blank_fraction: float = 0.1) -> np.ndarray:
    """Retina to Integrated Orientation Map.

    The blank threshold is ``blank_fraction`` times the largest response
    found in any of the orientation maps.
    """
    maps = [convolve(retina, k) for k in bank]
    top = max(float(m.max()) for m in maps)
    return inhibit(maps, blank_fraction * top, codes=[k.code for k in bank])


def dump_iom(path: str | os.PathLike, iom: np.ndarray) -> None:
    """Write codes 0-4 as ASCII, one row per line, no separators."""
    with open(path, "w", encoding="ascii") as fh:
        for row in np.asarray(iom):
            fh.write("".join(str(int(c)) for c in row) + "\n")


def load_iom(path: str | os.PathLike) -> np.ndarray:
    with open(path, encoding="ascii") as fh:
        rows = [line.strip() for line in fh if line.strip()]
    if len({len(r) for r in rows}) > 1:
        raise ValueError(f"{path}: ragged IOM rows")
    iom = np.array([[int(ch) for ch in r] for r in rows], dtype=np.int64)
    if iom.size and (iom.min() < 0 or iom.max() > 4):
        raise ValueError(f"{path}: codes must be 0-4")
    return iom
