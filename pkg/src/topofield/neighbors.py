"""Exact k-nearest-neighbor queries in the extrinsic Euclidean metric.

Results always agree with a brute-force scan: neighbors are ordered by
(distance, dataset index), so ties resolve to the smaller index.  The index
caches the full distance matrix up to ``MATRIX_LIMIT`` points and recomputes
rows on the fly above that, with identical arithmetic either way.
"""
from __future__ import annotations

import numpy as np

from .core import as_point, as_points

__all__ = ["NeighborIndex", "build", "knn"]

MATRIX_LIMIT = 4096


def _distance_rows(queries: np.ndarray, dataset: np.ndarray) -> np.ndarray:
    """(m, n) exact distances, same formula as core.euclidean_distance."""
    diff = queries[:, None, :] - dataset[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


class NeighborIndex:
    """Immutable neighbor index over one point set; queries are thread-safe."""

    def __init__(self, points):
        self.points = as_points(points)
        n = self.points.shape[0]
        if n <= MATRIX_LIMIT:
            self._matrix = _distance_rows(self.points, self.points)
            self._matrix.flags.writeable = False
        else:
            self._matrix = None

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def distances_from(self, query) -> np.ndarray:
        q = as_point(query)
        if q.shape[0] != self.dim:
            raise ValueError(
                f"query dimension {q.shape[0]} != dataset dimension {self.dim}"
            )
        return _distance_rows(q[None, :], self.points)[0]

    def knn(self, query, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Indices and distances of the min(k, n) nearest dataset points."""
        if k < 1:
            raise ValueError("k must be >= 1")
        dist = self.distances_from(query)
        order = np.argsort(dist, kind="stable")[: min(k, len(self))]
        return order, dist[order]

    def knn_self(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """kNN of every dataset point against the dataset itself, (n, k') arrays."""
        if k < 1:
            raise ValueError("k must be >= 1")
        k = min(k, len(self))
        if self._matrix is not None:
            order = np.argsort(self._matrix, axis=1, kind="stable")[:, :k]
            dist = np.take_along_axis(self._matrix, order, axis=1)
            return order, dist
        idx = np.empty((len(self), k), dtype=np.int64)
        dst = np.empty((len(self), k), dtype=np.float64)
        chunk = max(1, (1 << 24) // max(1, len(self)))
        for s in range(0, len(self), chunk):
            rows = _distance_rows(self.points[s : s + chunk], self.points)
            order = np.argsort(rows, axis=1, kind="stable")[:, :k]
            idx[s : s + chunk] = order
            dst[s : s + chunk] = np.take_along_axis(rows, order, axis=1)
        return idx, dst


def build(points) -> NeighborIndex:
    """Build an index; empty input is an error."""
    return NeighborIndex(points)


def knn(index: NeighborIndex, query, k: int) -> list[tuple[int, float]]:
    """The min(k, n) nearest neighbors of ``query`` as (index, distance) pairs."""
    idx, dist = index.knn(query, k)
    return [(int(i), float(d)) for i, d in zip(idx, dist)]
