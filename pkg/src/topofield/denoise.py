"""Functional denoising: k-median, minimum-disparity sliding window, kNN mean.

The denoisers share a deterministic neighbor convention: the k nearest
neighbors of a sample point include the point itself, ties broken by dataset
index.  With at least k' of the k neighbor values within delta of the true
field value (k' > k/2), the k-median estimate is off by at most delta and the
disparity estimate by at most (1 + 2*sqrt((k-k')/(2k'-k))) * delta.
"""
from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import DenoisedSample, ScalarSample
from .neighbors import NeighborIndex

__all__ = [
    "METHOD_MEDIAN",
    "METHOD_DISPARITY",
    "METHOD_KNN_MEAN",
    "METHODS",
    "disparity",
    "kmedian_denoise",
    "disparity_denoise",
    "knn_mean_denoise",
    "error_bound",
]

METHOD_MEDIAN = "median"
METHOD_DISPARITY = "disparity"
METHOD_KNN_MEAN = "knn-mean"
METHODS = (METHOD_MEDIAN, METHOD_DISPARITY, METHOD_KNN_MEAN)


def disparity(values) -> float:
    """Population variance of a non-empty value multiset."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("disparity needs a non-empty 1-d value sequence")
    mu = np.mean(v)
    return float(np.mean((v - mu) ** 2))


def _check_k(sample: ScalarSample, k: int) -> None:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > len(sample):
        raise ValueError(f"k={k} exceeds sample size {len(sample)}")


def check_disparity_params(k: int, kprime: int) -> None:
    """Enforce k >= k' > k/2 (strict on the lower side)."""
    if not (1 <= kprime <= k):
        raise ValueError(f"need 1 <= k'={kprime} <= k={k}")
    if not (2 * kprime > k):
        raise ValueError(f"need k' > k/2, got k'={kprime}, k={k}")


def _sorted_neighbor_values(sample: ScalarSample, k: int) -> np.ndarray:
    index = NeighborIndex(sample.points)
    idx, _ = index.knn_self(k)
    return np.sort(sample.values[idx], axis=1)


def kmedian_denoise(sample: ScalarSample, k: int) -> DenoisedSample:
    """Lower median of the k nearest neighbor values at every point."""
    _check_k(sample, k)
    vals = _sorted_neighbor_values(sample, k)
    return DenoisedSample(sample, vals[:, (k - 1) // 2])


def knn_mean_denoise(sample: ScalarSample, k: int) -> DenoisedSample:
    """Arithmetic mean of the k nearest neighbor values at every point."""
    _check_k(sample, k)
    vals = _sorted_neighbor_values(sample, k)
    return DenoisedSample(sample, np.mean(vals, axis=1))


def disparity_denoise(sample: ScalarSample, k: int, kprime: int) -> DenoisedSample:
    """Mean of the minimum-disparity window of k' consecutive sorted neighbor values.

    Scanning contiguous windows of the sorted values is exact: the variance-
    minimizing k'-subset of a multiset is always contiguous in sorted order.
    Window ties resolve to the smallest start index.
    """
    _check_k(sample, k)
    check_disparity_params(k, kprime)
    vals = _sorted_neighbor_values(sample, k)
    windows = sliding_window_view(vals, kprime, axis=1)  # (n, k-k'+1, k')
    mu = np.mean(windows, axis=2)
    phi = np.mean((windows - mu[:, :, None]) ** 2, axis=2)
    best = np.argmin(phi, axis=1)
    denoised = mu[np.arange(len(sample)), best]
    return DenoisedSample(sample, denoised)


def error_bound(method: str, k: int, kprime: int, delta: float) -> float:
    """Worst-case |estimate - true| for a sample meeting the (k, k', delta) condition."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if method == METHOD_MEDIAN:
        return float(delta)
    if method == METHOD_DISPARITY:
        check_disparity_params(k, kprime)
        kappa = 1.0 + 2.0 * math.sqrt((k - kprime) / (2 * kprime - k))
        return kappa * float(delta)
    if method == METHOD_KNN_MEAN:
        raise ValueError("the kNN-mean baseline has no outlier error bound")
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
