import numpy as np
import pytest

from topofield.core import rng_from_seed
from topofield.neighbors import NeighborIndex, build, knn

from oracles import brute_knn


def test_build_rejects_empty():
    with pytest.raises(ValueError):
        build([])


def test_knn_sorted_by_distance():
    index = build([[0.0], [1.0], [3.0]])
    assert knn(index, [0.0], 2) == [(0, 0.0), (1, 1.0)]


def test_knn_tie_broken_by_index():
    index = build([[0.0], [0.0]])
    assert knn(index, [0.0], 2) == [(0, 0.0), (1, 0.0)]


def test_knn_k_validation():
    index = build([[0.0], [1.0]])
    with pytest.raises(ValueError):
        index.knn([0.0], 0)
    with pytest.raises(ValueError):
        index.knn([0.0, 1.0], 1)


def test_knn_clamps_to_dataset_size():
    index = build([[0.0], [1.0]])
    assert len(knn(index, [0.0], 10)) == 2


def test_self_query_includes_self():
    pts = rng_from_seed(3).normal(size=(30, 2))
    index = build(pts)
    for i in (0, 7, 29):
        ids, dist = index.knn(pts[i], 5)
        assert ids[0] == i and dist[0] == 0.0


def test_matches_bruteforce_small():
    rng = rng_from_seed(21)
    pts = rng.normal(size=(200, 3))
    index = build(pts)
    queries = rng.normal(size=(25, 3))
    for q in queries:
        ids, dist = index.knn(q, 15)
        expected = brute_knn(pts, q, 15)
        assert [(int(i), float(d)) for i, d in zip(ids, dist)] == expected


def test_matches_bruteforce_large():
    rng = rng_from_seed(22)
    pts = rng.uniform(size=(1000, 2))
    index = build(pts)
    for q in rng.uniform(size=(100, 2)):
        ids, dist = index.knn(q, 7)
        expected = brute_knn(pts, q, 7)
        assert [(int(i), float(d)) for i, d in zip(ids, dist)] == expected


def test_self_batch_matches_single_queries():
    rng = rng_from_seed(23)
    pts = rng.normal(size=(60, 2))
    # duplicated points stress the tie-break
    pts[10] = pts[4]
    pts[50] = pts[4]
    index = build(pts)
    ids, dist = index.knn_self(6)
    for i in range(60):
        one_ids, one_dist = index.knn(pts[i], 6)
        assert ids[i].tolist() == one_ids.tolist()
        assert dist[i].tolist() == one_dist.tolist()


def test_chunked_path_equals_matrix_path():
    rng = rng_from_seed(24)
    pts = rng.normal(size=(80, 2))
    index = build(pts)
    import topofield.neighbors as nb

    old = nb.MATRIX_LIMIT
    try:
        nb.MATRIX_LIMIT = 10
        chunked = nb.NeighborIndex(pts)
        assert chunked._matrix is None
        a_ids, a_d = index.knn_self(9)
        b_ids, b_d = chunked.knn_self(9)
        assert np.array_equal(a_ids, b_ids)
        assert np.array_equal(a_d, b_d)
    finally:
        nb.MATRIX_LIMIT = old
