import math

import numpy as np
import pytest

from topofield.core import ScalarSample, rng_from_seed
from topofield.denoise import (
    disparity,
    disparity_denoise,
    error_bound,
    kmedian_denoise,
    knn_mean_denoise,
)
from topofield.neighbors import NeighborIndex

from oracles import min_subset_disparity


def make_functional_sample(rng, n, k, kprime, delta):
    """Random sample satisfying the (k, k', delta) neighbor-accuracy condition.

    The true field is linear with slope delta, inliers carry uniform noise of
    0.3*delta, and sparse outliers are huge.  The condition is re-verified
    point by point; construction retries until it holds.
    """
    for _ in range(60):
        pts = rng.uniform(0.0, 1.0, (n, 2))
        direction = rng.normal(size=2)
        direction *= delta / np.linalg.norm(direction)
        f = pts @ direction
        ftilde = f + rng.uniform(-0.3 * delta, 0.3 * delta, n)
        rate = 0.3 * (k - kprime) / k
        outliers = rng.random(n) < rate
        ftilde[outliers] += rng.choice([-1.0, 1.0], int(outliers.sum())) * 100.0 * (
            1.0 + delta
        )
        idx, _ = NeighborIndex(pts).knn_self(k)
        dev = np.abs(ftilde[idx] - f[:, None])
        if np.all(np.sum(dev <= delta, axis=1) >= kprime):
            return ScalarSample(pts, ftilde), f
    raise RuntimeError("could not realize the neighbor-accuracy condition")


def test_disparity_examples():
    assert disparity([1, 1, 1]) == 0.0
    assert disparity([0, 2]) == 1.0
    assert disparity([0, 10, 11]) == pytest.approx(74 / 3, abs=1e-12)


def test_disparity_empty_errors():
    with pytest.raises(ValueError):
        disparity([])


def test_kmedian_median_of_three():
    sample = ScalarSample([[0.0], [0.1], [0.2]], [1.0, 100.0, 2.0])
    out = kmedian_denoise(sample, 3)
    assert out.denoised.tolist() == [2.0, 2.0, 2.0]


def test_constant_field_fixed_by_all_methods():
    rng = rng_from_seed(5)
    sample = ScalarSample(rng.normal(size=(40, 2)), np.full(40, 7.0))
    for out in (
        kmedian_denoise(sample, 5),
        disparity_denoise(sample, 7, 5),
        knn_mean_denoise(sample, 5),
    ):
        assert np.array_equal(out.denoised, np.full(40, 7.0))


def test_disparity_window_example():
    # every point sees neighbor values {0, 10, 11}: windows {0,10} and {10,11}
    sample = ScalarSample([[0.0], [1.0], [2.0]], [0.0, 10.0, 11.0])
    out = disparity_denoise(sample, 3, 2)
    assert out.denoised.tolist() == [10.5, 10.5, 10.5]


def test_parameter_validation():
    sample = ScalarSample([[0.0], [1.0], [2.0]], [0.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        kmedian_denoise(sample, 4)
    with pytest.raises(ValueError):
        kmedian_denoise(sample, 0)
    with pytest.raises(ValueError):
        disparity_denoise(sample, 3, 1)  # k' <= k/2
    with pytest.raises(ValueError):
        disparity_denoise(sample, 2, 3)  # k' > k
    with pytest.raises(ValueError):
        disparity_denoise(ScalarSample([[0.0]] * 4, [0.0] * 4), 4, 2)  # k' == k/2


def test_kmedian_meets_delta_bound():
    rng = rng_from_seed(101)
    for _ in range(30):
        k = int(rng.integers(5, 16))
        kprime = int(rng.integers(k // 2 + 1, k + 1))
        delta = float(rng.uniform(0.01, 1.0))
        sample, f = make_functional_sample(rng, 70, k, kprime, delta)
        out = kmedian_denoise(sample, k)
        assert np.max(np.abs(out.denoised - f)) <= delta


def test_disparity_meets_kappa_delta_bound():
    rng = rng_from_seed(102)
    for _ in range(30):
        k = int(rng.integers(5, 16))
        kprime = int(rng.integers(k // 2 + 1, k + 1))
        delta = float(rng.uniform(0.01, 1.0))
        sample, f = make_functional_sample(rng, 70, k, kprime, delta)
        out = disparity_denoise(sample, k, kprime)
        bound = error_bound("disparity", k, kprime, delta)
        assert np.max(np.abs(out.denoised - f)) <= bound + 1e-9


def test_sliding_window_is_globally_optimal():
    rng = rng_from_seed(103)
    for _ in range(60):
        k = int(rng.integers(3, 13))
        kprime = int(rng.integers(k // 2 + 1, k + 1))
        values = rng.normal(scale=rng.uniform(0.1, 10.0), size=k)
        srt = np.sort(values)
        windows = np.lib.stride_tricks.sliding_window_view(srt, kprime)
        mu = np.mean(windows, axis=1)
        phi = np.mean((windows - mu[:, None]) ** 2, axis=1)
        assert float(phi.min()) == min_subset_disparity(values, kprime)


def test_disparity_full_window_equals_knn_mean():
    rng = rng_from_seed(104)
    pts = rng.normal(size=(50, 2))
    sample = ScalarSample(pts, rng.normal(size=50))
    a = disparity_denoise(sample, 6, 6).denoised
    b = knn_mean_denoise(sample, 6).denoised
    assert np.array_equal(a, b)


def test_shift_and_scale_equivariance():
    rng = rng_from_seed(105)
    pts = rng.normal(size=(60, 2))
    values = rng.normal(size=60)
    sample = ScalarSample(pts, values)
    shifted = ScalarSample(pts, values + 13.5)
    scaled = ScalarSample(pts, values * 3.25)
    for fn in (
        lambda s: kmedian_denoise(s, 7).denoised,
        lambda s: disparity_denoise(s, 7, 5).denoised,
        lambda s: knn_mean_denoise(s, 7).denoised,
    ):
        base = fn(sample)
        assert np.allclose(fn(shifted), base + 13.5, rtol=0, atol=1e-9)
        assert np.allclose(fn(scaled), base * 3.25, rtol=1e-9, atol=1e-12)


def test_error_bound_values():
    assert error_bound("median", 9, 5, 0.5) == 0.5
    assert error_bound("disparity", 9, 6, 1.0) == pytest.approx(3.0, abs=1e-12)
    assert error_bound("disparity", 9, 9, 1.0) == 1.0
    with pytest.raises(ValueError):
        error_bound("knn-mean", 9, 9, 1.0)
    with pytest.raises(ValueError):
        error_bound("disparity", 9, 4, 1.0)
    with pytest.raises(ValueError):
        error_bound("median", 9, 9, -1.0)
    with pytest.raises(ValueError):
        error_bound("other", 9, 9, 1.0)
