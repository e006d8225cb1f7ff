"""Waves of spikes: unfolding a Response Map in time by activation level.

Wave 1 holds the tiles with unit activation. Wave ``k >= 2`` holds tiles
with activation in ``[1 - (k-1)*eps, 1 - (k-2)*eps)``. A schedule keeps a
per-tile band index (0 = never fires) and steps through it one wave at a
time, with delivery accumulating into a cumulative Feature Map.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = ["WaveSchedule", "band", "band_index", "first_wave_maps", "advance", "n_bands"]

# band edges are compared after rounding to this many decimals
_DECIMALS = 9


def n_bands(epsilon: float) -> int:
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    return math.ceil(round(1.0 / epsilon, _DECIMALS))


def band_index(activations, epsilon: float = 0.1) -> np.ndarray:
    """Wave number of every tile; 0 for blanks and for activations below the last band."""
    a = np.asarray(activations, dtype=float)
    nb = n_bands(epsilon)
    if a.size and (np.isnan(a).any() or a.min() < 0 or a.max() > 1):
        raise ValueError("activations must lie in [0, 1]")
    k = 1 + np.ceil(np.round((1.0 - a) / epsilon, _DECIMALS))
    k = np.maximum(k, 2)
    k[a == 1.0] = 1
    k[(a <= 0) | (k > nb)] = 0
    return k.astype(np.int64)


class WaveSchedule:
    """Single-owner state machine delivering one wave per step.

    ``band_of`` maps each tile to its wave number, ``activations`` holds the
    (possibly amplified) response levels and ``current_step`` counts the
    waves delivered so far.
    """

    def __init__(self, activations, epsilon: float = 0.1):
        self.epsilon = float(epsilon)
        self.n_bands = n_bands(epsilon)
        self.activations = np.array(activations, dtype=float)
        self.band_of = band_index(self.activations, epsilon)
        self.current_step = 0

    @property
    def shape(self):
        return self.band_of.shape

    def wave(self, k: int) -> np.ndarray:
        """Boolean mask of wave ``k`` (1-based)."""
        return self.band_of == k

    @property
    def bands(self) -> list[frozenset]:
        """Waves as sets of (row, col) tile coordinates; empty waves are kept."""
        return [frozenset(map(tuple, np.argwhere(self.band_of == k).tolist()))
                for k in range(1, self.n_bands + 1)]

    @property
    def fired(self) -> np.ndarray:
        return (self.band_of >= 1) & (self.band_of <= self.current_step)

    @property
    def done(self) -> bool:
        """True once every tile that will ever fire has fired."""
        return not np.any(self.band_of > self.current_step)

    @property
    def exhausted(self) -> bool:
        return self.done or self.current_step >= self.n_bands

    def cumulative(self, fmap) -> np.ndarray:
        fmap = np.asarray(fmap)
        if fmap.shape != self.shape:
            raise ValueError(f"feature map {fmap.shape} does not match schedule {self.shape}")
        return np.where(self.fired, fmap, 0)

    def advance(self, fmap) -> tuple[np.ndarray, bool]:
        """Deliver the next wave; returns the cumulative Feature Map and the done flag."""
        if self.exhausted:
            raise RuntimeError("wave schedule is exhausted")
        self.current_step += 1
        return self.cumulative(fmap), self.done

    def amplify(self, promotion) -> "WaveSchedule":
        """Top-down amplification: promoted tiles jump to activation 1 and fire next.

        Activations become ``min(AL + 1, 1)``. Tiles already fired cannot be
        promoted.
        """
        promotion = np.asarray(promotion, dtype=bool)
        if promotion.shape != self.shape:
            raise ValueError("promotion mask does not match schedule")
        if not promotion.any():
            return self
        if np.any(promotion & self.fired):
            raise ValueError("cannot promote a tile that has already fired")
        if np.any(promotion & (self.activations <= 0)):
            raise ValueError("amplification cannot create activity at a blank tile")
        if self.exhausted:
            raise RuntimeError("wave schedule is exhausted")
        self.activations[promotion] = np.minimum(self.activations[promotion] + 1.0, 1.0)
        self.band_of[promotion] = self.current_step + 1
        return self

    def histogram(self) -> np.ndarray:
        """Tile count of waves 1..n_bands."""
        return np.bincount(self.band_of.ravel(), minlength=self.n_bands + 1)[1:self.n_bands + 1]


def band(rmap, epsilon: float = 0.1) -> WaveSchedule:
    return WaveSchedule(rmap, epsilon)


def advance(schedule: WaveSchedule, fmap) -> tuple[np.ndarray, bool]:
    return schedule.advance(fmap)


def first_wave_maps(fmap, rmap) -> tuple[np.ndarray, np.ndarray]:
    """First-wave Feature Map (ids of unit-activation tiles only) and its 0/1 response grid."""
    fmap = np.asarray(fmap)
    rmap = np.asarray(rmap, dtype=float)
    if fmap.shape != rmap.shape:
        raise ValueError(f"feature map {fmap.shape} and response map {rmap.shape} differ")
    unit = rmap == 1.0
    return np.where(unit, fmap, 0), unit.astype(np.int64)
