"""Distance to the empirical measure and geometric outlier filtering.

The distance to a measure at mass k/n is the root mean square of the
distances to the k nearest sample points; a sample point counts itself at
distance zero.  Filtering keeps the sublevel set of this function, which is
1-Lipschitz and stable under Wasserstein perturbation of the sample.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import ScalarSample, as_points
from .neighbors import NeighborIndex, _distance_rows

__all__ = [
    "k_from_mass",
    "dtm_value",
    "dtm_values",
    "dtm_self",
    "dtm_filter",
    "wasserstein2_empirical",
    "W2_MAX_POINTS",
]

W2_MAX_POINTS = 64


def k_from_mass(n: int, mass: float) -> int:
    """Neighbor count for a mass parameter in (0, 1]: k = ceil(mass * n)."""
    if not (0.0 < mass <= 1.0):
        raise ValueError("mass must lie in (0, 1]")
    return max(1, math.ceil(mass * n))


def _check_dtm_k(index: NeighborIndex, k: int) -> None:
    if not (1 <= k <= len(index)):
        raise ValueError(f"k={k} out of range [1, {len(index)}]")


def dtm_value(index: NeighborIndex, query, k: int) -> float:
    """RMS of the k smallest distances from ``query`` to the dataset."""
    _check_dtm_k(index, k)
    _, dist = index.knn(query, k)
    return float(np.sqrt(np.mean(dist * dist)))


def dtm_values(index: NeighborIndex, queries, k: int) -> np.ndarray:
    """Vectorized dtm_value over a batch of query points."""
    _check_dtm_k(index, k)
    q = as_points(queries)
    if q.shape[1] != index.dim:
        raise ValueError("query dimension mismatch")
    out = np.empty(q.shape[0], dtype=np.float64)
    chunk = max(1, (1 << 24) // max(1, len(index)))
    for s in range(0, q.shape[0], chunk):
        rows = _distance_rows(q[s : s + chunk], index.points)
        rows.partition(k - 1, axis=1)
        smallest = rows[:, :k]
        out[s : s + chunk] = np.sqrt(np.mean(smallest * smallest, axis=1))
    return out


def dtm_self(index: NeighborIndex, k: int) -> np.ndarray:
    """dtm of every dataset point against its own empirical measure."""
    _check_dtm_k(index, k)
    _, dist = index.knn_self(k)
    return np.sqrt(np.mean(dist * dist, axis=1))


def dtm_filter(
    sample: ScalarSample, k: int, eta: float
) -> tuple[np.ndarray, ScalarSample]:
    """Keep the points whose distance to the empirical measure is <= eta.

    Returns (kept indices in input order, filtered sample).  An eta below the
    minimum dtm empties the result; the caller sees the usual size errors
    downstream.
    """
    index = NeighborIndex(sample.points)
    values = dtm_self(index, k)
    kept = np.flatnonzero(values <= eta)
    return kept, sample.subset(kept)


def wasserstein2_empirical(P, Q) -> float:
    """Exact W2 between equal-size empirical measures via optimal assignment.

    Restricted to at most ``W2_MAX_POINTS`` points per side; this is a
    desk-scale oracle, not a general transport solver.
    """
    A = as_points(P)
    B = as_points(Q)
    if A.shape[0] != B.shape[0]:
        raise ValueError("empirical W2 oracle needs equal-size point sets")
    if A.shape[1] != B.shape[1]:
        raise ValueError("dimension mismatch")
    if A.shape[0] > W2_MAX_POINTS:
        raise ValueError(f"oracle limited to {W2_MAX_POINTS} points per side")
    d = _distance_rows(A, B)
    cost = d * d
    rows, cols = linear_sum_assignment(cost)
    return float(np.sqrt(cost[rows, cols].sum() / A.shape[0]))
