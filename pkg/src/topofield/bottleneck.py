"""Exact bottleneck distance between persistence diagrams.

Diagrams are compared per homology dimension and the results aggregated by
max.  Within a dimension, points with infinite death match only each other at
cost |birth difference| (a count mismatch makes the distance infinite), and
finite points match across diagrams or onto their own diagonal projection at
cost (death - birth)/2.  The optimum is found by binary search over the
finite candidate costs, testing feasibility with bipartite matchings: a
threshold t works iff every point too tall for the diagonal (lifespan > 2t)
can be matched within t, checked independently on both sides.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from ._kernels import matching_saturates
from .core import PersistenceDiagram

__all__ = ["bottleneck_distance", "bottleneck_bruteforce"]


def _essential_part(births_a: np.ndarray, births_b: np.ndarray) -> float:
    if births_a.size != births_b.size:
        return math.inf
    if births_a.size == 0:
        return 0.0
    # the max-|difference|-minimizing bijection of two real multisets pairs
    # them in sorted order
    return float(np.max(np.abs(np.sort(births_a) - np.sort(births_b))))


def _cross_costs(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((A.shape[0], B.shape[0]), dtype=np.float64)
    return np.max(np.abs(A[:, None, :] - B[None, :, :]), axis=2)


def _finite_part(A: np.ndarray, B: np.ndarray) -> float:
    n, m = A.shape[0], B.shape[0]
    if n == 0 and m == 0:
        return 0.0
    half_a = (A[:, 1] - A[:, 0]) / 2.0
    half_b = (B[:, 1] - B[:, 0]) / 2.0
    cross = _cross_costs(A, B)
    candidates = np.unique(np.concatenate([cross.reshape(-1), half_a, half_b, [0.0]]))

    def feasible(t: float) -> bool:
        tall_a = half_a > t
        tall_b = half_b > t
        if np.any(tall_a) and not matching_saturates(cross[tall_a, :], t):
            return False
        if np.any(tall_b) and not matching_saturates(cross[:, tall_b].T, t):
            return False
        return True

    lo, hi = 0, candidates.size - 1
    best = candidates[-1]
    while lo <= hi:
        mid = (lo + hi) // 2
        if feasible(float(candidates[mid])):
            best = candidates[mid]
            hi = mid - 1
        else:
            lo = mid + 1
    return float(best)


def bottleneck_distance(D: PersistenceDiagram, E: PersistenceDiagram) -> float:
    """Exact bottleneck distance; math.inf when essential counts differ."""
    result = 0.0
    for q in sorted(set(D.dims) | set(E.dims)):
        ess = _essential_part(D.essential_births(q), E.essential_births(q))
        if math.isinf(ess):
            return math.inf
        fin = _finite_part(D.finite_array(q), E.finite_array(q))
        result = max(result, ess, fin)
    return result


def _enumerate_finite(A: list, B: list) -> float:
    """Exhaustive min-max matching cost with diagonal projections allowed."""
    best = math.inf

    def rec(i: int, used: int, cur: float):
        nonlocal best
        if cur >= best:
            return
        if i == len(A):
            total = cur
            for j, (b, d) in enumerate(B):
                if not used >> j & 1:
                    total = max(total, (d - b) / 2.0)
                    if total >= best:
                        return
            best = total
            return
        ab, ad = A[i]
        rec(i + 1, used, max(cur, (ad - ab) / 2.0))
        for j, (bb, bd) in enumerate(B):
            if not used >> j & 1:
                cost = max(abs(ab - bb), abs(ad - bd))
                rec(i + 1, used | (1 << j), max(cur, cost))

    rec(0, 0, 0.0)
    return best


def bottleneck_bruteforce(D: PersistenceDiagram, E: PersistenceDiagram) -> float:
    """Independent oracle: enumerate every matching, diagrams of <= 6 points
    per dimension each."""
    result = 0.0
    for q in sorted(set(D.dims) | set(E.dims)):
        pd, pe = D.in_dim(q), E.in_dim(q)
        if len(pd) > 6 or len(pe) > 6:
            raise ValueError("brute-force oracle limited to 6 points per dimension")
        ea = [p.birth for p in pd if p.essential]
        eb = [p.birth for p in pe if p.essential]
        if len(ea) != len(eb):
            return math.inf
        ess = math.inf
        if ea:
            for perm in itertools.permutations(range(len(eb))):
                cost = max(abs(ea[i] - eb[j]) for i, j in enumerate(perm))
                ess = min(ess, cost)
        else:
            ess = 0.0
        fa = [(p.birth, p.death) for p in pd if not p.essential]
        fb = [(p.birth, p.death) for p in pe if not p.essential]
        result = max(result, ess, _enumerate_finite(fa, fb))
    return result
