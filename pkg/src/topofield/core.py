"""Shared domain types: samples, persistence diagrams, manifold constants.

Arrays are the lingua franca: a point is a 1-d float64 array, a point set is
an (n, d) array.  Every container freezes its arrays after validation, so all
types are safe to share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "as_point",
    "as_points",
    "euclidean_distance",
    "rng_from_seed",
    "ScalarSample",
    "DenoisedSample",
    "PersistencePair",
    "PersistenceDiagram",
    "ManifoldParams",
]


def rng_from_seed(seed: int) -> np.random.Generator:
    """Deterministic generator for a 64-bit seed; same seed, same stream."""
    return np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)


def as_point(p) -> np.ndarray:
    """Validate and convert one point to a read-only float64 vector."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("a point must be a non-empty 1-d coordinate sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def as_points(points, allow_empty: bool = False) -> np.ndarray:
    """Validate and convert a point sequence to a read-only (n, d) array."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None] if arr.size else arr.reshape(0, 1)
    if arr.ndim != 2 or arr.shape[1] == 0 or (arr.shape[0] == 0 and not allow_empty):
        raise ValueError("expected a non-empty (n, d) point array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def euclidean_distance(p, q) -> float:
    """Exact Euclidean distance between two points of equal dimension."""
    a = np.asarray(p, dtype=np.float64)
    b = np.asarray(q, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.sqrt(np.sum(d * d)))


@dataclass(frozen=True)
class ScalarSample:
    """A finite point cloud with one observed scalar value per point."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = as_points(self.points, allow_empty=True)
        vals = np.asarray(self.values, dtype=np.float64).copy()
        if vals.ndim != 1 or vals.shape[0] != pts.shape[0]:
            raise ValueError(
                f"need one value per point: {pts.shape[0]} points, {vals.shape} values"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("observed values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def with_values(self, values) -> "ScalarSample":
        return ScalarSample(self.points, values)

    def subset(self, indices) -> "ScalarSample":
        idx = np.asarray(indices, dtype=np.intp)
        return ScalarSample(self.points[idx], self.values[idx])


@dataclass(frozen=True)
class DenoisedSample:
    """A sample together with its regression estimate of the true field."""

    sample: ScalarSample
    denoised: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.denoised, dtype=np.float64).copy()
        if vals.shape != (len(self.sample),):
            raise ValueError("need one denoised value per sample point")
        if not np.all(np.isfinite(vals)):
            raise ValueError("denoised values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "denoised", vals)


@dataclass(frozen=True, order=True)
class PersistencePair:
    """One diagram point: a feature of dimension `dim` alive on [birth, death).

    An essential feature (never dying) carries death = math.inf; serialization
    writes the literal ``inf`` so the marker is unambiguous.
    """

    dim: int
    birth: float
    death: float

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("homology dimension must be >= 0")
        if not math.isfinite(self.birth):
            raise ValueError("birth must be finite")
        if math.isnan(self.death) or self.death < self.birth:
            raise ValueError("death must satisfy birth <= death")

    @property
    def essential(self) -> bool:
        return math.isinf(self.death)

    @property
    def lifespan(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of persistence pairs across homology dimensions.

    The diagonal is not stored; distance computations add it implicitly.
    """

    pairs: tuple[PersistencePair, ...]

    def __init__(self, pairs: Iterable[PersistencePair] = ()):
        object.__setattr__(self, "pairs", tuple(pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return sorted(self.pairs) == sorted(other.pairs)

    def __hash__(self):
        return hash(tuple(sorted(self.pairs)))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(sorted({p.dim for p in self.pairs}))

    def in_dim(self, dim: int) -> tuple[PersistencePair, ...]:
        return tuple(p for p in self.pairs if p.dim == dim)

    def finite_array(self, dim: int) -> np.ndarray:
        """Finite (birth, death) rows for one dimension, shape (m, 2)."""
        rows = [(p.birth, p.death) for p in self.in_dim(dim) if not p.essential]
        return np.asarray(rows, dtype=np.float64).reshape(-1, 2)

    def essential_births(self, dim: int) -> np.ndarray:
        return np.asarray(
            [p.birth for p in self.in_dim(dim) if p.essential], dtype=np.float64
        )

    def lifespans(self, dim: int) -> np.ndarray:
        return np.asarray([p.lifespan for p in self.in_dim(dim)], dtype=np.float64)

    def translated(self, offset: float) -> "PersistenceDiagram":
        return PersistenceDiagram(
            PersistencePair(p.dim, p.birth + offset, p.death + offset)
            for p in self.pairs
        )


@dataclass(frozen=True)
class ManifoldParams:
    """Analytic constants of the sampled manifold used by bound calculators."""

    reach: float
    strong_convexity: float
    lipschitz: float
    curvature_bound: float
    volume: float
    intrinsic_dim: int

    def __post_init__(self):
        if not self.reach > 0:
            raise ValueError("reach must be positive")
        if not self.strong_convexity > 0:
            raise ValueError("strong convexity radius must be positive")
        if self.lipschitz < 0:
            raise ValueError("Lipschitz constant must be >= 0")
        if not self.curvature_bound > 0:
            raise ValueError("curvature bound must be positive")
        if not self.volume > 0:
            raise ValueError("volume must be positive")
        if self.intrinsic_dim < 1:
            raise ValueError("intrinsic dimension must be >= 1")
