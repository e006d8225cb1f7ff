"""IT: stored objects as RBF centres over Feature Maps, response grids, novelty gate."""
from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

__all__ = [
    "Decision",
    "StoredObject",
    "ObjectRepository",
    "ResponseGrid",
    "store_object",
    "it_response",
    "response_grid",
    "recognize",
]


class Decision(str, enum.Enum):
    RECOGNIZED = "recognized"
    NOVEL = "novel"


@dataclass
class StoredObject:
    """An object held by IT: its full Feature Map at storage time.

    ``dist_it`` is the sum of squared feature ids and ``beta_it`` its
    reciprocal. In indicator mode both count nonzero entries instead.
    """

    id: int
    obj_map: np.ndarray
    dist_it: int
    beta_it: float

    @classmethod
    def from_map(cls, oid: int, obj_map, indicator: bool = False) -> "StoredObject":
        obj_map = np.array(obj_map, dtype=np.int64)
        if obj_map.ndim != 2:
            raise ValueError("object maps are two-dimensional")
        if not obj_map.any():
            raise ValueError("cannot store an all-zero feature map")
        if obj_map.min() < 0:
            raise ValueError("feature ids are non-negative")
        dist = int(np.count_nonzero(obj_map)) if indicator else int((obj_map ** 2).sum())
        obj_map.setflags(write=False)
        return cls(oid, obj_map, dist, 1.0 / dist)


class ObjectRepository:
    """Append-only store of objects with dense ids from 1."""

    def __init__(self, alpha: float = 0.67, indicator_metric: bool = False):
        if not 0 < alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        self.alpha = alpha
        self.indicator_metric = indicator_metric
        self.objects: list[StoredObject] = []

    def __len__(self):
        return len(self.objects)

    def __getitem__(self, oid: int) -> StoredObject:
        if not 1 <= oid <= len(self.objects):
            raise KeyError(oid)
        return self.objects[oid - 1]

    def __iter__(self):
        return iter(self.objects)

    def store(self, fmap) -> int:
        obj = StoredObject.from_map(len(self.objects) + 1, fmap, self.indicator_metric)
        self.objects.append(obj)
        return obj.id

    def replace_map(self, oid: int, obj_map) -> StoredObject:
        """Swap in an updated map for an object, recomputing its RBF width."""
        obj = StoredObject.from_map(oid, obj_map, self.indicator_metric)
        self.objects[oid - 1] = obj
        return obj

    def to_text(self) -> str:
        lines = [f"# alpha={self.alpha!r} indicator_metric={int(self.indicator_metric)}",
                 "# id rows cols entries..."]
        for obj in self.objects:
            m, n = obj.obj_map.shape
            lines.append(" ".join(str(v) for v in (obj.id, m, n, *obj.obj_map.ravel().tolist())))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ObjectRepository":
        head, *rest = text.splitlines()
        opts = dict(kv.split("=") for kv in head.lstrip("# ").split())
        repo = cls(float(opts["alpha"]), bool(int(opts["indicator_metric"])))
        for line in rest:
            if not line.strip() or line.startswith("#"):
                continue
            oid, m, n, *entries = (int(v) for v in line.split())
            if oid != len(repo) + 1 or len(entries) != m * n:
                raise ValueError(f"malformed object record {oid}")
            repo.store(np.array(entries).reshape(m, n))
        return repo

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ObjectRepository":
        with open(path, encoding="ascii") as fh:
            return cls.from_text(fh.read())


def store_object(repo: ObjectRepository, fmap) -> int:
    return repo.store(fmap)


def _check_dims(obj: StoredObject, inp: np.ndarray):
    if inp.shape != obj.obj_map.shape:
        raise ValueError(f"input map {inp.shape} does not match object {obj.obj_map.shape}")


def it_response(obj: StoredObject, inp, offset=(0, 0), indicator: bool = False) -> float:
    """exp(-beta_it * D) with D summed over the object's coordinates.

    The input is read at ``(i + dy, j + dx)`` for object entry ``(i, j)``
    and counts as 0 outside its bounds. ``D`` is the squared difference of
    feature ids, or the mismatch count with ``indicator``.
    """
    inp = np.asarray(inp, dtype=np.int64)
    _check_dims(obj, inp)
    dx, dy = offset
    m, n = inp.shape
    shifted = np.zeros_like(inp)
    r0, r1 = max(0, -dy), min(m, m - dy)
    c0, c1 = max(0, -dx), min(n, n - dx)
    if r0 < r1 and c0 < c1:
        shifted[r0:r1, c0:c1] = inp[r0 + dy:r1 + dy, c0 + dx:c1 + dx]
    if indicator:
        d = int(np.count_nonzero(shifted != obj.obj_map))
    else:
        d = int(((shifted - obj.obj_map) ** 2).sum())
    # same array exp path as response_grid, so both agree to the bit
    return float(np.exp(-obj.beta_it * np.array([d], dtype=float))[0])


@dataclass(frozen=True, eq=False)
class ResponseGrid:
    """IT responses over offsets; ``values[dy + r, dx + r]``."""

    values: np.ndarray
    radius: int
    max: float
    argmax: tuple[int, int]  # (dx, dy)


def response_grid(obj: StoredObject, inp, radius: int = 5, indicator: bool = False) -> ResponseGrid:
    """Evaluate the object's RBF unit at every offset in [-radius, radius]^2.

    The maximum is attained first in (dy, dx) row-major order, so ties go to
    the lexicographically smallest offset.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    inp = np.asarray(inp, dtype=np.int64)
    _check_dims(obj, inp)
    m, n = inp.shape
    padded = np.pad(inp, radius)
    windows = sliding_window_view(padded, (m, n))  # [dy + r, dx + r, i, j]
    if indicator:
        d = (windows != obj.obj_map).sum(axis=(2, 3))
    else:
        d = ((windows - obj.obj_map) ** 2).sum(axis=(2, 3))
    values = np.exp(-obj.beta_it * d.astype(float))
    k = int(np.argmax(values))
    dy, dx = divmod(k, 2 * radius + 1)
    values.setflags(write=False)
    return ResponseGrid(values, radius, float(values.flat[k]), (dx - radius, dy - radius))


def recognize(max_response: float, alpha: float = 0.67) -> Decision:
    """Recognized when the pooled response reaches alpha (inclusive)."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return Decision.RECOGNIZED if max_response >= alpha else Decision.NOVEL
