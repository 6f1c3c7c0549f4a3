"""Vietoris-Rips complexes filtered by vertex values, and nested pairs.

Convention fixed throughout this package: the Rips complex at scale delta has
an edge between two points iff their distance is <= 2*delta (closed), and a
simplex iff all pairwise vertex distances pass that test.  The filtration
value of a simplex is the maximum denoised value over its vertices, so the
sub-complex at level alpha is exactly the Rips complex over the points with
value <= alpha.

Simplices are stored columnar per dimension: an (m, d+1) int32 array of
strictly increasing vertex rows in lexicographic order, plus one float64
filtration value per row.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from ._kernels import expand_cliques
from .core import as_points

__all__ = ["FilteredComplex", "NestedPair", "build_rips", "build_nested_pair"]

_PACK_LIMIT = np.int64(1) << 62


def distance_matrix(points: np.ndarray) -> np.ndarray:
    """Full symmetric distance matrix, chunked to bound peak memory."""
    n = points.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    chunk = max(1, (1 << 24) // max(1, n))
    for s in range(0, n, chunk):
        diff = points[s : s + chunk, None, :] - points[None, :, :]
        out[s : s + chunk] = np.sqrt(np.sum(diff * diff, axis=-1))
    return out


def pack_rows(rows: np.ndarray, base: int):
    """Encode sorted vertex tuples as int64 keys; None if the base overflows."""
    k = rows.shape[1]
    if base < 1 or float(base) ** k >= float(_PACK_LIMIT):
        return None
    keys = rows[:, 0].astype(np.int64)
    for j in range(1, k):
        keys = keys * base + rows[:, j]
    return keys


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """A finite simplicial complex with a vertex-max filtration.

    ``clique_closed`` promises that every clique of the 1-skeleton with at
    most top_dim + 1 vertices is present (true for Rips construction); the
    reduction uses it to discard redundant boundary columns.
    """

    n_vertices: int
    dim_simplices: tuple[np.ndarray, ...]
    dim_values: tuple[np.ndarray, ...]
    clique_closed: bool = False

    def __post_init__(self):
        simp = []
        vals = []
        for d, (s, v) in enumerate(zip(self.dim_simplices, self.dim_values)):
            s = np.ascontiguousarray(s, dtype=np.int32).reshape(-1, d + 1)
            v = np.asarray(v, dtype=np.float64).reshape(-1)
            if s.shape[0] != v.shape[0]:
                raise ValueError(f"dimension {d}: {s.shape[0]} simplices, {v.shape[0]} values")
            if not np.all(np.isfinite(v)):
                raise ValueError("filtration values must be finite")
            if s.size:
                if s.min() < 0 or s.max() >= self.n_vertices:
                    raise ValueError("vertex index out of range")
                if d > 0 and not np.all(np.diff(s, axis=1) > 0):
                    raise ValueError("simplex vertices must be strictly increasing")
                keys = pack_rows(s, self.n_vertices)
                if keys is not None and np.any(np.diff(keys) <= 0):
                    raise ValueError("simplices must be lex-sorted and unique")
            s.flags.writeable = False
            v.flags.writeable = False
            simp.append(s)
            vals.append(v)
        object.__setattr__(self, "dim_simplices", tuple(simp))
        object.__setattr__(self, "dim_values", tuple(vals))

    # -- structure ---------------------------------------------------------

    @property
    def top_dim(self) -> int:
        return len(self.dim_simplices) - 1

    def count(self, dim: int) -> int:
        if 0 <= dim <= self.top_dim:
            return self.dim_simplices[dim].shape[0]
        return 0

    def __len__(self) -> int:
        return sum(s.shape[0] for s in self.dim_simplices)

    @cached_property
    def _keys(self) -> tuple:
        out = []
        for d in range(self.top_dim + 1):
            keys = pack_rows(self.dim_simplices[d], self.n_vertices)
            if keys is None:
                keys = {tuple(row): i for i, row in enumerate(self.dim_simplices[d])}
            out.append(keys)
        return tuple(out)

    def locate(self, dim: int, rows: np.ndarray) -> np.ndarray:
        """Positions of the given simplex rows within dimension ``dim``; -1 if absent."""
        rows = np.ascontiguousarray(rows, dtype=np.int32).reshape(-1, dim + 1)
        if dim > self.top_dim or self.count(dim) == 0:
            return np.full(rows.shape[0], -1, dtype=np.int64)
        keys = self._keys[dim]
        if isinstance(keys, dict):
            return np.asarray(
                [keys.get(tuple(r), -1) for r in rows], dtype=np.int64
            )
        target = pack_rows(rows, self.n_vertices)
        pos = np.searchsorted(keys, target)
        pos = np.minimum(pos, keys.shape[0] - 1)
        out = np.where(keys[pos] == target, pos, -1)
        return out.astype(np.int64)

    def contains(self, simplex) -> bool:
        row = np.asarray(sorted(simplex), dtype=np.int32)
        return int(self.locate(row.size - 1, row[None, :])[0]) >= 0

    def value_of(self, simplex) -> float:
        row = np.asarray(sorted(simplex), dtype=np.int32)
        pos = int(self.locate(row.size - 1, row[None, :])[0])
        if pos < 0:
            raise KeyError(f"simplex {tuple(simplex)} not in complex")
        return float(self.dim_values[row.size - 1][pos])

    def simplices(self) -> Iterator[tuple[tuple[int, ...], float]]:
        for d in range(self.top_dim + 1):
            s, v = self.dim_simplices[d], self.dim_values[d]
            for i in range(s.shape[0]):
                yield tuple(int(x) for x in s[i]), float(v[i])

    def sublevel(self, alpha: float) -> "FilteredComplex":
        """Sub-complex of simplices with filtration value <= alpha."""
        simp = []
        vals = []
        for d in range(self.top_dim + 1):
            mask = self.dim_values[d] <= alpha
            simp.append(self.dim_simplices[d][mask])
            vals.append(self.dim_values[d][mask])
        return FilteredComplex(
            self.n_vertices, tuple(simp), tuple(vals), self.clique_closed
        )

    def validate_closure(self) -> None:
        """Check face closure and face-value monotonicity (exhaustive)."""
        for d in range(1, self.top_dim + 1):
            s = self.dim_simplices[d]
            v = self.dim_values[d]
            if s.shape[0] == 0:
                continue
            for drop in range(d + 1):
                facet = np.delete(s, drop, axis=1)
                pos = self.locate(d - 1, facet)
                if np.any(pos < 0):
                    raise ValueError(f"missing facet in dimension {d - 1}")
                if np.any(self.dim_values[d - 1][pos] > v):
                    raise ValueError("face filtration value exceeds coface value")


@dataclass(frozen=True, eq=False)
class NestedPair:
    """An inclusion of Rips complexes at two scales over the same points."""

    small: FilteredComplex
    large: FilteredComplex

    def __post_init__(self):
        a, b = self.small, self.large
        if a.n_vertices != b.n_vertices:
            raise ValueError("nested complexes must share the vertex set")
        if a.top_dim > b.top_dim:
            raise ValueError("small complex exceeds the large one in dimension")
        for d in range(a.top_dim + 1):
            if a.count(d) == 0:
                continue
            pos = b.locate(d, a.dim_simplices[d])
            if np.any(pos < 0):
                raise ValueError(f"small complex not contained in large (dim {d})")
            if not np.array_equal(b.dim_values[d][pos], a.dim_values[d]):
                raise ValueError("filtration values disagree on shared simplices")


def _rips_arrays(
    points: np.ndarray, threshold: float, max_dim: int
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Cliques of the distance graph up to dimension max_dim+1, with diameters."""
    n = points.shape[0]
    dmat = distance_matrix(points)
    adj = dmat <= threshold
    np.fill_diagonal(adj, False)

    verts = np.arange(n, dtype=np.int32)[:, None]
    simplices = [verts]
    diameters = [np.zeros(n, dtype=np.float64)]

    iu, ju = np.nonzero(np.triu(adj, k=1))
    edges = np.column_stack([iu, ju]).astype(np.int32)
    simplices.append(edges)
    diameters.append(dmat[iu, ju])

    for d in range(2, max_dim + 2):
        prev = simplices[d - 1]
        if prev.shape[0] == 0:
            simplices.append(np.empty((0, d + 1), np.int32))
            diameters.append(np.empty(0, np.float64))
            continue
        nxt = expand_cliques(adj, prev)
        if nxt.shape[0] == 0:
            simplices.append(nxt)
            diameters.append(np.empty(0, np.float64))
            continue
        # each extension appends one vertex; its diameter is the max of the
        # parent diameter and the distances to the new vertex
        if d == 2:
            em = np.full((n, n), -1, dtype=np.int64)
            em[prev[:, 0], prev[:, 1]] = np.arange(prev.shape[0], dtype=np.int64)
            parent_pos = em[nxt[:, 0], nxt[:, 1]]
        else:
            parent_pos = np.searchsorted(
                _edge_order_keys(prev, n), _edge_order_keys(nxt[:, :-1], n)
            )
        diam = diameters[d - 1][parent_pos]
        new_v = nxt[:, -1]
        for j in range(d):
            diam = np.maximum(diam, dmat[nxt[:, j], new_v])
        simplices.append(nxt)
        diameters.append(diam)
    return simplices, diameters


def _edge_order_keys(rows: np.ndarray, n: int) -> np.ndarray:
    keys = pack_rows(rows, n)
    if keys is None:
        raise ValueError("complex too large for packed simplex keys")
    return keys


def _vertex_max_values(simplices: list[np.ndarray], values: np.ndarray):
    out = [values.copy()]
    for s in simplices[1:]:
        out.append(
            np.max(values[s], axis=1) if s.shape[0] else np.empty(0, np.float64)
        )
    return out


def _check_build_args(points, values, delta: float, max_dim: int):
    pts = as_points(points)
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 1 or vals.shape[0] != pts.shape[0]:
        raise ValueError(
            f"inconsistent lengths: {pts.shape[0]} points, {vals.shape} values"
        )
    if not np.all(np.isfinite(vals)):
        raise ValueError("filtration values must be finite")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    return pts, vals


def build_rips(points, values, delta: float, max_dim: int) -> FilteredComplex:
    """Rips complex at scale delta (edges at distance <= 2*delta).

    Simplices are materialized through dimension max_dim+1, which is exactly
    what homology through dimension max_dim needs.
    """
    pts, vals = _check_build_args(points, values, delta, max_dim)
    simplices, _ = _rips_arrays(pts, 2.0 * delta, max_dim)
    return FilteredComplex(
        pts.shape[0], tuple(simplices), tuple(_vertex_max_values(simplices, vals)),
        clique_closed=True,
    )


def build_nested_pair(
    points, values, delta: float, delta_prime: float, max_dim: int
) -> NestedPair:
    """The inclusion of the scale-delta Rips complex into the scale-delta' one.

    Both complexes come from one clique enumeration at the larger scale, the
    smaller being the sub-complex of simplices with diameter <= 2*delta, so
    containment holds structurally and is re-verified by the pair constructor.
    """
    pts, vals = _check_build_args(points, values, delta, max_dim)
    if delta > delta_prime:
        raise ValueError("delta must be <= delta_prime")
    simplices, diameters = _rips_arrays(pts, 2.0 * delta_prime, max_dim)
    all_values = _vertex_max_values(simplices, vals)
    large = FilteredComplex(
        pts.shape[0], tuple(simplices), tuple(all_values), clique_closed=True
    )

    small_s = []
    small_v = []
    for d in range(len(simplices)):
        mask = diameters[d] <= 2.0 * delta
        small_s.append(simplices[d][mask])
        small_v.append(all_values[d][mask])
    small = FilteredComplex(
        pts.shape[0], tuple(small_s), tuple(small_v), clique_closed=True
    )
    return NestedPair(small, large)
