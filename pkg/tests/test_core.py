import math

import numpy as np
import pytest

from topofield.core import (
    PersistenceDiagram,
    PersistencePair,
    ScalarSample,
    as_point,
    as_points,
    euclidean_distance,
    rng_from_seed,
)


def test_euclidean_distance_examples():
    assert euclidean_distance([0, 0], [0, 0]) == 0.0
    assert euclidean_distance([0, 0], [3, 4]) == 5.0
    assert euclidean_distance([1, 1, 1], [2, 2, 2]) == pytest.approx(
        math.sqrt(3), abs=1e-12
    )


def test_euclidean_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        euclidean_distance([0, 0], [1, 2, 3])


def test_euclidean_symmetry_and_identity():
    rng = rng_from_seed(7)
    for _ in range(50):
        p, q = rng.normal(size=(2, 4))
        assert euclidean_distance(p, q) == euclidean_distance(q, p)
        assert euclidean_distance(p, p) == 0.0


def test_triangle_inequality_random_triples():
    rng = rng_from_seed(11)
    for _ in range(300):
        a, b, c = rng.normal(scale=10.0, size=(3, 5))
        ab = euclidean_distance(a, b)
        bc = euclidean_distance(b, c)
        ac = euclidean_distance(a, c)
        assert ac <= ab + bc + 1e-12 * max(1.0, ab + bc)


def test_point_validation():
    with pytest.raises(ValueError):
        as_point([])
    with pytest.raises(ValueError):
        as_point([1.0, math.nan])
    with pytest.raises(ValueError):
        as_points(np.empty((0, 2)))
    arr = as_point([1.0, 2.0])
    assert not arr.flags.writeable


def test_scalar_sample_validation():
    with pytest.raises(ValueError):
        ScalarSample([[0.0], [1.0]], [1.0])
    with pytest.raises(ValueError):
        ScalarSample([[0.0]], [math.inf])
    s = ScalarSample([[0.0, 1.0], [2.0, 3.0]], [1.0, 2.0])
    assert len(s) == 2 and s.dim == 2
    assert not s.points.flags.writeable
    assert not s.values.flags.writeable
    sub = s.subset([1])
    assert sub.values.tolist() == [2.0]


def test_persistence_pair_invariants():
    with pytest.raises(ValueError):
        PersistencePair(0, 2.0, 1.0)
    with pytest.raises(ValueError):
        PersistencePair(0, math.inf, math.inf)
    p = PersistencePair(1, 0.0, math.inf)
    assert p.essential and p.lifespan == math.inf


def test_diagram_multiset_equality():
    a = PersistenceDiagram([PersistencePair(0, 0.0, 1.0), PersistencePair(1, 2.0, 3.0)])
    b = PersistenceDiagram([PersistencePair(1, 2.0, 3.0), PersistencePair(0, 0.0, 1.0)])
    assert a == b
    c = PersistenceDiagram([PersistencePair(0, 0.0, 1.0)])
    assert a != c
    assert a.translated(1.0).in_dim(0)[0].birth == 1.0


def test_seeded_rng_deterministic():
    assert rng_from_seed(123).integers(0, 1 << 32, 8).tolist() == \
        rng_from_seed(123).integers(0, 1 << 32, 8).tolist()
    assert rng_from_seed(1).integers(0, 1 << 32, 8).tolist() != \
        rng_from_seed(2).integers(0, 1 << 32, 8).tolist()
