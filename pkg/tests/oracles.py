"""Independent brute-force oracles shared across test modules.

Everything here recomputes results from first principles (linear scans,
subset enumeration, explicit rank grids) and deliberately avoids the
library's fast paths.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter

import numpy as np

from topofield.core import euclidean_distance
from topofield.persistence import rank_oracle


def brute_knn(points: np.ndarray, query, k: int):
    """k nearest neighbors by linear scan, sorted by (distance, index)."""
    dist = [euclidean_distance(query, p) for p in points]
    order = sorted(range(len(points)), key=lambda i: (dist[i], i))[:k]
    return [(i, dist[i]) for i in order]


def brute_dtm(points: np.ndarray, query, k: int) -> float:
    d = sorted(euclidean_distance(query, p) for p in points)[:k]
    return math.sqrt(sum(x * x for x in d) / k)


def brute_rips_simplices(points: np.ndarray, delta: float, max_dim: int):
    """All simplices with pairwise vertex distance <= 2*delta, by subset scan."""
    n = len(points)
    out = {d: set() for d in range(max_dim + 2)}
    for d in range(max_dim + 2):
        for combo in itertools.combinations(range(n), d + 1):
            if all(
                euclidean_distance(points[a], points[b]) <= 2.0 * delta
                for a, b in itertools.combinations(combo, 2)
            ):
                out[d].add(combo)
    return out


def min_subset_disparity(values, kprime: int) -> float:
    """Minimum population variance over all k'-subsets of a value multiset.

    Enumerates subsets of the sorted sequence so the optimal contiguous
    window evaluates with the same float operations as the implementation.
    """
    v = np.sort(np.asarray(values, dtype=np.float64))
    best = math.inf
    for combo in itertools.combinations(range(v.size), kprime):
        window = v[list(combo)]
        mu = np.mean(window)
        phi = float(np.mean((window - mu) ** 2))
        if phi < best:
            best = phi
    return best


def rank_grid_diagram(pair, max_dim: int) -> Counter:
    """Image diagram multiplicities from the dense rank oracle by
    inclusion-exclusion over the grid of distinct filtration values."""
    parts = [v for v in pair.large.dim_values if v.size]
    values = np.unique(np.concatenate(parts)) if parts else np.empty(0)
    n = values.size
    result: Counter = Counter()
    for q in range(max_dim + 1):
        cache = {}

        def r(i: int, j: int) -> int:
            if i == 0 or j == 0:
                return 0
            if (i, j) not in cache:
                cache[(i, j)] = rank_oracle(pair, q, values[i - 1], values[j - 1])
            return cache[(i, j)]

        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                mult = r(i, j - 1) - r(i, j) - r(i - 1, j - 1) + r(i - 1, j)
                assert mult >= 0, "negative multiplicity in the rank grid"
                if mult:
                    result[(q, values[i - 1], values[j - 1])] += mult
            mult = r(i, n) - r(i - 1, n)
            assert mult >= 0
            if mult:
                result[(q, values[i - 1], math.inf)] += mult
    return result


def diagram_counter(diagram) -> Counter:
    return Counter((p.dim, p.birth, p.death) for p in diagram.pairs)


def random_nested_pair(rng, n_max=12, distinct_values=3, max_dim=1):
    """Random small nested Rips pair with few distinct filtration values."""
    from topofield.rips import build_nested_pair

    n = int(rng.integers(4, n_max + 1))
    pts = rng.uniform(0.0, 1.0, (n, 2))
    palette = np.sort(rng.uniform(0.0, 1.0, int(rng.integers(1, distinct_values + 1))))
    values = palette[rng.integers(0, palette.size, n)]
    d1 = float(rng.uniform(0.05, 0.5))
    d2 = d1 * float(rng.uniform(1.0, 2.5))
    return build_nested_pair(pts, values, d1, d2, max_dim)
