"""V4: a growing dictionary of 3x3 orientation features and RBF feature maps."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PATCH",
    "Prototype",
    "FeatureRepository",
    "tile",
    "admit",
    "rbf_variance",
    "rbf_response",
    "build_maps",
    "save_map_csv",
    "load_map_csv",
]

PATCH = 3


@dataclass
class Prototype:
    """A stored feature: the RBF centre plus its usage bookkeeping.

    ``born`` is the index of the stimulus that introduced the feature and
    ``survived`` counts the disposal rounds it has come through.
    """

    id: int
    vector: tuple[int, ...]
    dist_v4: int
    beta_v4: float
    tau: int = 0
    born: int = 0
    survived: int = 0


def rbf_variance(dist_v4: int, var_fraction: float = 0.1) -> float:
    """Var^2 of a V4 unit: ``dist_v4 * var_fraction``."""
    # divide by the reciprocal so the default fraction gives exactly dist / 10
    return dist_v4 / (1.0 / var_fraction)


def _beta(dist_v4: int, var_fraction: float) -> float:
    return 1.0 / (2.0 * rbf_variance(dist_v4, var_fraction))


class FeatureRepository:
    """Ordered feature dictionary with distance-gated growth.

    Ids run densely from 1 in insertion order. Weights never adapt; a
    candidate is only recorded when it is far enough from what is stored.
    """

    def __init__(self, novelty_fraction: float = 0.1, var_fraction: float = 0.1,
                 global_beta: bool = False):
        if novelty_fraction < 0:
            raise ValueError("novelty_fraction must be non-negative")
        if not var_fraction > 0:
            raise ValueError("var_fraction must be positive")
        self.novelty_fraction = novelty_fraction
        self.var_fraction = var_fraction
        self.global_beta = global_beta
        self.prototypes: list[Prototype] = []
        self._cache = None

    def __len__(self):
        return len(self.prototypes)

    def __getitem__(self, pid: int) -> Prototype:
        if not 1 <= pid <= len(self.prototypes):
            raise KeyError(pid)
        return self.prototypes[pid - 1]

    def _arrays(self):
        if self._cache is None:
            if self.prototypes:
                vectors = np.array([p.vector for p in self.prototypes], dtype=np.int64)
            else:
                vectors = np.zeros((0, PATCH * PATCH), dtype=np.int64)
            dist = np.array([p.dist_v4 for p in self.prototypes], dtype=np.int64)
            self._cache = (vectors, dist)
        return self._cache

    def invalidate(self):
        self._cache = None

    @property
    def vectors(self) -> np.ndarray:
        return self._arrays()[0]

    @property
    def dist_v4(self) -> np.ndarray:
        return self._arrays()[1]

    @property
    def betas(self) -> np.ndarray:
        if self.global_beta and self.prototypes:
            return np.full(len(self.prototypes), self.prototypes[0].beta_v4)
        return np.array([p.beta_v4 for p in self.prototypes], dtype=float)

    @property
    def taus(self) -> np.ndarray:
        return np.array([p.tau for p in self.prototypes], dtype=np.int64)

    def add(self, vector, tau: int = 0, born: int = 0, survived: int = 0) -> Prototype:
        vec = tuple(int(v) for v in vector)
        if len(vec) != PATCH * PATCH:
            raise ValueError(f"feature vectors have {PATCH * PATCH} entries, got {len(vec)}")
        if any(v < 0 or v > 4 for v in vec):
            raise ValueError(f"orientation codes must be 0-4: {vec}")
        dist = sum(v * v for v in vec)
        if dist == 0:
            raise ValueError("the blank (all-zero) vector cannot be stored")
        proto = Prototype(len(self.prototypes) + 1, vec, dist, _beta(dist, self.var_fraction),
                          tau, born, survived)
        self.prototypes.append(proto)
        self.invalidate()
        return proto

    def nearest(self, vector) -> tuple[int, float]:
        """Id and Euclidean distance of the closest stored vector (lowest id on ties)."""
        d = np.sqrt(((self.vectors - np.asarray(vector, dtype=np.int64)) ** 2).sum(axis=1))
        k = int(np.argmin(d))
        return k + 1, float(d[k])

    def admit(self, vector, born: int = 0) -> tuple[int, bool]:
        """Store ``vector`` if it lies beyond the novelty radius of its nearest prototype.

        The radius is ``novelty_fraction * dist_v4`` of that nearest
        prototype. Returns the id of the new prototype, or of the nearest one
        when nothing was stored.
        """
        vector = np.asarray(vector, dtype=np.int64).ravel()
        if not vector.any():
            raise ValueError("blank tiles are never candidate features")
        if not self.prototypes:
            return self.add(vector, born=born).id, True
        pid, d = self.nearest(vector)
        if d > self.novelty_fraction * self[pid].dist_v4:
            return self.add(vector, born=born).id, True
        return pid, False

    def to_text(self) -> str:
        lines = [f"# novelty_fraction={self.novelty_fraction!r} var_fraction={self.var_fraction!r} "
                 f"global_beta={int(self.global_beta)}",
                 "# id c1 c2 c3 c4 c5 c6 c7 c8 c9 tau born survived"]
        for p in self.prototypes:
            lines.append(" ".join(str(v) for v in (p.id, *p.vector, p.tau, p.born, p.survived)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FeatureRepository":
        head, *rest = text.splitlines()
        opts = dict(kv.split("=") for kv in head.lstrip("# ").split())
        repo = cls(float(opts["novelty_fraction"]), float(opts["var_fraction"]),
                   bool(int(opts["global_beta"])))
        for line in rest:
            if not line.strip() or line.startswith("#"):
                continue
            nums = [int(v) for v in line.split()]
            proto = repo.add(nums[1:10], tau=nums[10], born=nums[11], survived=nums[12])
            if proto.id != nums[0]:
                raise ValueError(f"feature ids must be dense from 1; got {nums[0]}")
        return repo

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path: str | os.PathLike) -> "FeatureRepository":
        with open(path, encoding="ascii") as fh:
            return cls.from_text(fh.read())


def tile(iom, stride: int = PATCH) -> tuple[np.ndarray, np.ndarray]:
    """Cut the IOM into 3x3 receptive fields.

    Returns ``(coords, vectors)``: tile origins in IOM coordinates, shape
    (m, n, 2), and row-major flattened patches, shape (m, n, 9). With the
    default stride tiles do not overlap and leftover rows/columns are dropped.
    """
    iom = np.asarray(iom, dtype=np.int64)
    if iom.ndim != 2 or iom.shape[0] < PATCH or iom.shape[1] < PATCH:
        raise ValueError(f"IOM {iom.shape} is smaller than one {PATCH}x{PATCH} tile")
    if stride < 1:
        raise ValueError("stride must be positive")
    m = (iom.shape[0] - PATCH) // stride + 1
    n = (iom.shape[1] - PATCH) // stride + 1
    rows = np.arange(m) * stride
    cols = np.arange(n) * stride
    coords = np.stack(np.meshgrid(rows, cols, indexing="ij"), axis=-1)
    dr, dc = np.mgrid[0:PATCH, 0:PATCH]
    vectors = iom[rows[:, None, None, None] + dr, cols[None, :, None, None] + dc]
    return coords, vectors.reshape(m, n, PATCH * PATCH)


def admit(repo: FeatureRepository, vector, born: int = 0) -> tuple[int, bool]:
    return repo.admit(vector, born=born)


def rbf_response(vector, proto: Prototype, beta: float | None = None) -> float:
    """exp(-beta * ||vector - prototype||^2), using the prototype's own beta by default."""
    diff = np.asarray(vector, dtype=np.int64).ravel() - np.asarray(proto.vector, dtype=np.int64)
    b = proto.beta_v4 if beta is None else beta
    return float(np.exp(-b * np.array([diff @ diff], dtype=float))[0])


def build_maps(iom, repo: FeatureRepository, grow: bool = True, stride: int = PATCH,
               stimulus: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Feature Map and Response Map of an IOM.

    With ``grow`` every non-blank tile is first offered to the repository in
    row-major order; afterwards each tile is labelled with the prototype of
    highest RBF response (lowest id on ties) and that prototype's counter is
    incremented. Blank tiles get id 0 and activation 0.
    """
    _, vectors = tile(iom, stride)
    m, n, _ = vectors.shape
    flat = vectors.reshape(m * n, -1)
    nonblank = flat.any(axis=1)
    if grow:
        for vec in flat[nonblank]:
            repo.admit(vec, born=stimulus)
    fmap = np.zeros(m * n, dtype=np.int64)
    rmap = np.zeros(m * n, dtype=float)
    if nonblank.any():
        if not len(repo):
            raise ValueError("empty feature repository and grow=False")
        cand = flat[nonblank]
        sq = ((cand[:, None, :] - repo.vectors[None, :, :]) ** 2).sum(axis=2)
        resp = np.exp(-repo.betas[None, :] * sq.astype(float))
        best = np.argmax(resp, axis=1)
        fmap[nonblank] = best + 1
        rmap[nonblank] = resp[np.arange(len(best)), best]
        counts = np.bincount(best, minlength=len(repo))
        for proto, c in zip(repo.prototypes, counts):
            proto.tau += int(c)
    return fmap.reshape(m, n), rmap.reshape(m, n)


def save_map_csv(path: str | os.PathLike, grid) -> None:
    """CSV grid; integers as-is, floats via repr so they reload exactly."""
    grid = np.asarray(grid)
    fmt = (lambda v: str(int(v))) if grid.dtype.kind in "iub" else (lambda v: repr(float(v)))
    with open(path, "w", encoding="ascii") as fh:
        for row in grid:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def load_map_csv(path: str | os.PathLike, dtype=float) -> np.ndarray:
    with open(path, encoding="ascii") as fh:
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return np.array([[dtype(v) for v in r] for r in rows], dtype=dtype)
