"""Stimulus input: quantized grayscale retinas, file loading and synthetic shapes."""
from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .pgm import read_pgm, write_pgm

__all__ = [
    "LEVELS",
    "Retina",
    "StimulusError",
    "ShapeSpec",
    "SHAPES",
    "CATALOG",
    "PICTURE_NOISE",
    "quantize",
    "load_stimulus",
    "save_stimulus",
    "generate_synthetic",
    "parse_shape",
]

# 11 gray levels 0.0, 0.1, ..., 1.0
LEVELS = 10


class StimulusError(ValueError):
    """Raised when a stimulus cannot be turned into a valid retina."""


@dataclass(frozen=True, eq=False)
class Retina:
    """Immutable grid of gray levels, each a multiple of 0.1 in [0, 1]."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.array(self.pixels, dtype=float)
        if px.ndim != 2:
            raise StimulusError("retina must be two-dimensional")
        levels = px * LEVELS
        if np.any(px < 0) or np.any(px > 1) or np.any(np.abs(levels - np.round(levels)) > 1e-9):
            raise StimulusError("retina pixels must be multiples of 0.1 in [0, 1]")
        px = np.round(levels) / LEVELS
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    @property
    def levels(self) -> np.ndarray:
        """Integer gray levels 0..10."""
        return np.round(self.pixels * LEVELS).astype(np.int64)

    def __eq__(self, other):
        if not isinstance(other, Retina):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    __hash__ = None


def quantize(values) -> Retina:
    """Round each value in [0, 1] to the nearest 0.1, halves rounding up."""
    values = np.asarray(values, dtype=float)
    if values.size and (np.isnan(values).any() or values.min() < 0 or values.max() > 1):
        raise StimulusError("values to quantize must lie in [0, 1]")
    # the inner round absorbs representation error so that 0.45 counts as a midpoint
    levels = np.floor(np.round(values * LEVELS, 9) + 0.5)
    return Retina(levels / LEVELS)


def load_stimulus(path: str | os.PathLike, target: tuple[int, int] | None = (100, 100),
                  resize: bool = False, min_size: int = 7) -> Retina:
    """Load a graymap file as a retina.

    Intensities are mapped linearly by the file's declared maxval and then
    quantized. With ``target`` set, images of any other size are rejected
    unless ``resize`` is true, in which case they are resampled
    nearest-neighbor. ``min_size`` is the V1 kernel size the retina must
    accommodate.
    """
    samples, maxval = read_pgm(path)
    if target is not None and samples.shape != tuple(target):
        if not resize:
            raise StimulusError(
                f"{path}: image is {samples.shape[0]}x{samples.shape[1]}, "
                f"expected {target[0]}x{target[1]}")
        rows = (np.arange(target[0]) * samples.shape[0]) // target[0]
        cols = (np.arange(target[1]) * samples.shape[1]) // target[1]
        samples = samples[np.ix_(rows, cols)]
    if min(samples.shape) < min_size:
        raise StimulusError(
            f"{path}: image {samples.shape} is smaller than the {min_size}x{min_size} kernel")
    return quantize(samples / maxval)


def save_stimulus(path: str | os.PathLike, retina: Retina, binary: bool = True) -> None:
    """Write a retina as a graymap with maxval 10, so levels survive exactly."""
    write_pgm(path, retina.levels, LEVELS, binary=binary)


# --- synthetic stimuli -----------------------------------------------------

SHAPES = ("bar", "l-corner", "cup-silhouette", "hand-silhouette", "composite")


@dataclass(frozen=True)
class ShapeSpec:
    """A named shape from the synthetic catalog plus its pose.

    ``theta`` is a counter-clockwise rotation in degrees as seen on screen,
    ``dx``/``dy`` shift the shape right/down in pixels, ``spread`` opens the
    fingers of a hand, ``noise`` is the std of additive gaussian noise drawn
    from the generation seed.
    """

    name: str
    theta: float = 0.0
    scale: float = 1.0
    dx: float = 0.0
    dy: float = 0.0
    width: float = 2.0
    spread: float = 12.0
    level: float = 1.0
    noise: float = 0.0

    def __post_init__(self):
        if self.name not in SHAPES:
            raise StimulusError(f"unknown shape {self.name!r}; expected one of {SHAPES}")

    def token(self) -> str:
        """Compact text form accepted by :func:`parse_shape`."""
        parts = [self.name]
        for f in dataclasses.fields(self)[1:]:
            value = getattr(self, f.name)
            if value != f.default:
                parts.append(f"{f.name}={value!r}")
        return ":".join(parts)


def parse_shape(token: str) -> ShapeSpec:
    """Parse ``name:key=value:...`` into a :class:`ShapeSpec`."""
    name, *pairs = token.strip().split(":")
    kwargs = {}
    names = {f.name for f in dataclasses.fields(ShapeSpec)} - {"name"}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or key not in names:
            raise StimulusError(f"bad shape parameter {pair!r} in {token!r}")
        try:
            kwargs[key] = float(value)
        except ValueError:
            raise StimulusError(f"bad value for {key} in {token!r}") from None
    return ShapeSpec(name, **kwargs)


class _Canvas:
    """Local, rotated coordinates for painting shapes on a pixel grid.

    Painting is in order; later strokes overwrite earlier ones. ``ink`` is
    the shape's gray level and ``crease`` the darker level of inner lines.
    """

    def __init__(self, shape, spec: ShapeSpec):
        h, w = shape
        rows, cols = np.mgrid[0:h, 0:w].astype(float)
        x = cols - ((w - 1) / 2 + spec.dx)
        y = ((h - 1) / 2 + spec.dy) - rows  # screen up is +y
        t = math.radians(spec.theta)
        self.u = (x * math.cos(t) + y * math.sin(t)) / spec.scale
        self.v = (-x * math.sin(t) + y * math.cos(t)) / spec.scale
        self.image = np.zeros(shape)
        self.scale = spec.scale
        self.ink = spec.level
        self.crease = 0.4 * spec.level

    def fill(self, mask, value=None):
        self.image[mask] = self.ink if value is None else value

    def rect(self, u0, v0, length, width, angle=0.0, value=None):
        """Rectangle of ``length`` along ``angle`` (degrees) centred at (u0, v0)."""
        a = math.radians(angle)
        du, dv = self.u - u0, self.v - v0
        along = du * math.cos(a) + dv * math.sin(a)
        across = -du * math.sin(a) + dv * math.cos(a)
        self.fill((np.abs(along) <= length / 2) & (np.abs(across) <= width / 2), value)

    def segment(self, u0, v0, length, width, angle, value=None):
        """Rectangle starting at (u0, v0) and extending ``length`` along ``angle``."""
        a = math.radians(angle)
        self.rect(u0 + length / 2 * math.cos(a), v0 + length / 2 * math.sin(a),
                  length, width, angle, value)

    def ellipse(self, u0, v0, ru, rv, value=None):
        self.fill(((self.u - u0) / ru) ** 2 + ((self.v - v0) / rv) ** 2 <= 1.0, value)

    def ring(self, u0, v0, r_out, r_in, u_min=-np.inf, value=None):
        r2 = (self.u - u0) ** 2 + (self.v - v0) ** 2
        self.fill((r2 <= r_out ** 2) & (r2 >= r_in ** 2) & (self.u >= u_min), value)


def _bar(c: _Canvas, spec: ShapeSpec):
    # width is in retina pixels; divide out the scale applied to local coordinates
    c.rect(0, 0, 60, spec.width / c.scale)


def _l_corner(c: _Canvas, spec: ShapeSpec):
    w = spec.width / c.scale
    c.segment(-20, -20, 40, w, 0)
    c.segment(-20, -20, 40, w, 90)


def _cup(c: _Canvas, spec: ShapeSpec):
    c.ring(11, 2, 12, 6, u_min=8)
    c.rect(-4, -2, 32, 42, 90)
    c.rect(-4, 18, 32, 4)
    c.rect(-4, 18, 26, 1.5, value=c.crease)  # rim
    c.rect(-4, -4, 32, 3, value=c.crease)  # band
    c.rect(-4, -20, 30, 2, value=c.crease)  # base


def _hand(c: _Canvas, spec: ShapeSpec):
    s = spec.spread
    c.ellipse(0, -12, 16, 19)
    for i, base_u in enumerate((-11.0, -3.7, 3.7, 11.0)):
        angle = 90 + (1.5 - i) * s / 1.5
        c.segment(base_u, 0, 26 if i in (1, 2) else 21, 6, angle)
    c.segment(-12, -16, 20, 7, 160 + s / 2)
    # gaps between fingers, palm creases, knuckles
    for u in (-7.4, 0.0, 7.4):
        c.segment(u, 2, 8, 1.2, 90, value=c.crease)
    c.segment(-12, -6, 22, 1.2, -15, value=c.crease)
    c.segment(-6, -18, 16, 1.2, 40, value=c.crease)
    c.rect(0, -1, 26, 1.2, value=c.crease)


def _composite(c: _Canvas, spec: ShapeSpec):
    # cup on the left, hand on the right, both shrunk
    u, v = c.u, c.v
    c.u, c.v = (u + 22) / 0.6, v / 0.6
    _cup(c, spec)
    c.u, c.v = (u - 22) / 0.6, v / 0.6
    _hand(c, spec)
    c.u, c.v = u, v


_PAINTERS = {
    "bar": _bar,
    "l-corner": _l_corner,
    "cup-silhouette": _cup,
    "hand-silhouette": _hand,
    "composite": _composite,
}


def generate_synthetic(spec: ShapeSpec | str, seed: int = 0,
                       size: tuple[int, int] = (100, 100)) -> Retina:
    """Rasterize a catalog shape at ``spec.level`` on a black background.

    The result depends only on ``(spec, seed, size)``.
    """
    if isinstance(spec, str):
        spec = parse_shape(spec)
    canvas = _Canvas(size, spec)
    _PAINTERS[spec.name](canvas, spec)
    image = canvas.image
    if spec.noise > 0:
        rng = np.random.default_rng(seed)
        image = image + rng.normal(0.0, spec.noise, size)
    return quantize(np.clip(image, 0.0, 1.0))


# Pixel noise given to catalog pictures; clean silhouettes extract too few features.
PICTURE_NOISE = 0.08

# Ten hand and cup pictures, the make-up of the headline experiment's stimulus set.
CATALOG: tuple[ShapeSpec, ...] = tuple(
    ShapeSpec(name, noise=PICTURE_NOISE, **pose) for name, pose in (
        ("hand-silhouette", {}),
        ("hand-silhouette", {"theta": 20.0}),
        ("hand-silhouette", {"spread": 4.0, "scale": 0.9}),
        ("hand-silhouette", {"theta": -30.0, "spread": 20.0}),
        ("cup-silhouette", {}),
        ("hand-silhouette", {"theta": 180.0, "spread": 8.0}),
        ("composite", {}),
        ("cup-silhouette", {"theta": 15.0, "scale": 0.85, "level": 0.7}),
        ("hand-silhouette", {"theta": 90.0, "spread": 16.0, "scale": 0.95}),
        ("hand-silhouette", {"scale": 1.15, "dx": -5.0, "dy": 4.0, "level": 0.8}),
    )
)
