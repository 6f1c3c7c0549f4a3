"""Persistent homology over Z/2 and image persistence of nested pairs.

The boundary matrix splits into independent blocks, one per dimension: the
block of dimension q+1 has the (q+1)-simplices as columns (ordered by value,
then lexicographically) and the q-simplices as rows.  ``diagram`` reads the
persistence pairs off the reduced blocks of a single complex.

``image_diagram`` computes the persistence of the images
H_q(K_alpha) -> H_q(K'_alpha) of an inclusion K in K': the large complex's
blocks are reduced with rows reordered so every simplex of K precedes every
simplex of K' \\ K.  A reduced column whose pivot lands in the K band is a
cycle of K that bounds in K', which is an image death; image births are the
cycle creators of K itself, and unmatched creators are essential.

On clique complexes most boundary columns are redundant and are discarded
before reduction: if a simplex has a neighbor u adjacent to all its vertices
with smaller index and value not above the simplex's, its boundary is the
boundary of the cone of u over its facets, a sum of columns strictly earlier
in (value, dimension, lex) order.  Dropping such columns preserves every
column-prefix span of the block, hence the pivot rows and the death values;
only the identity of death columns within one filtration value can shuffle,
which the diagram cannot see.

``rank_oracle`` recomputes the underlying ranks by dense Z/2 elimination on
explicit cycle and boundary bases; it shares nothing with the sparse
reduction and exists to cross-check it.
"""
from __future__ import annotations

import math

import numpy as np

from ._gf2 import gf2_nullspace, gf2_rank
from ._kernels import cone_discard, reduce_columns
from .core import PersistenceDiagram, PersistencePair
from .rips import FilteredComplex, NestedPair

__all__ = ["diagram", "image_diagram", "betti_numbers", "rank_oracle"]

_EDGE_MATRIX_LIMIT = 8192
_BITSET_LIMIT = 16384


# ---------------------------------------------------------------------------
# Block assembly
# ---------------------------------------------------------------------------

def _vertex_identity(cx: FilteredComplex) -> bool:
    v = cx.dim_simplices[0][:, 0]
    return v.shape[0] == cx.n_vertices and v[0] == 0 and v[-1] == cx.n_vertices - 1


def _edge_matrix(cx: FilteredComplex):
    if cx.n_vertices > _EDGE_MATRIX_LIMIT:
        return None
    em = np.full((cx.n_vertices, cx.n_vertices), -1, dtype=np.int64)
    e = cx.dim_simplices[1]
    em[e[:, 0], e[:, 1]] = np.arange(e.shape[0], dtype=np.int64)
    return em


def _facet_locals(cx: FilteredComplex, q1: int, subset=None) -> np.ndarray:
    """Local indices (into dimension q1-1) of every facet of each q1-simplex."""
    simp = cx.dim_simplices[q1]
    if subset is not None:
        simp = simp[subset]
    m = simp.shape[0]
    out = np.empty((m, q1 + 1), dtype=np.int64)
    if q1 == 1 and _vertex_identity(cx):
        out[:, 0] = simp[:, 0]
        out[:, 1] = simp[:, 1]
        return out
    if q1 == 2:
        em = _edge_matrix(cx)
        if em is not None:
            out[:, 0] = em[simp[:, 1], simp[:, 2]]
            out[:, 1] = em[simp[:, 0], simp[:, 2]]
            out[:, 2] = em[simp[:, 0], simp[:, 1]]
            if out.min(initial=0) < 0:
                raise ValueError("complex is not closed under faces")
            return out
    for drop in range(q1 + 1):
        facet = np.delete(simp, drop, axis=1)
        local = cx.locate(q1 - 1, facet)
        if np.any(local < 0):
            raise ValueError("complex is not closed under faces")
        out[:, drop] = local
    return out


def _row_order(values: np.ndarray, member):
    """Permutation and ranks for (member-first, value, lex) row order."""
    m = values.shape[0]
    if member is None:
        perm = np.argsort(values, kind="stable")
    else:
        perm = np.lexsort((np.arange(m), values, (~member).view(np.int8)))
    rank = np.empty(m, dtype=np.int64)
    rank[perm] = np.arange(m, dtype=np.int64)
    return perm, rank


def _cone_structures(cx: FilteredComplex):
    """Vertex ranks in (value, index) order and the adjacency in that order."""
    if not cx.clique_closed or cx.n_vertices > _BITSET_LIMIT or cx.top_dim < 1:
        return None
    n = cx.n_vertices
    if not _vertex_identity(cx):
        return None
    values = cx.dim_values[0]
    rank = np.empty(n, dtype=np.int64)
    rank[np.argsort(values, kind="stable")] = np.arange(n, dtype=np.int64)
    adj = np.zeros((n, n), dtype=bool)
    e = cx.dim_simplices[1]
    ru, rv = rank[e[:, 0]], rank[e[:, 1]]
    adj[ru, rv] = True
    adj[rv, ru] = True
    return rank, adj


def _keep_mask(cx: FilteredComplex, q1: int, cone):
    if cone is None:
        return None
    rank, adj = cone
    rank_rows = rank[cx.dim_simplices[q1]]
    return ~cone_discard(adj, rank_rows, rank_rows.min(axis=1))


def _block_pairs(cx: FilteredComplex, q1: int, row_member, cone):
    """Pivot pairs of the boundary block from dimension q1 to q1 - 1.

    Returns (row_locals, col_locals).  ``row_member`` reorders rows so member
    simplices come first.  Cone-redundant columns are dropped up front; pair
    rows and death values are unaffected, death column identities may shuffle
    within one filtration value.
    """
    m0 = cx.count(q1 - 1)
    m1 = cx.count(q1)
    empty = (np.empty(0, np.int64), np.empty(0, np.int64))
    if m0 == 0 or m1 == 0:
        return empty
    keep = _keep_mask(cx, q1, cone)
    kept = np.flatnonzero(keep) if keep is not None else np.arange(m1, dtype=np.int64)
    if kept.size == 0:
        return empty
    facets = _facet_locals(cx, q1, kept)
    row_perm, row_rank = _row_order(cx.dim_values[q1 - 1], row_member)
    col_perm, _ = _row_order(cx.dim_values[q1][kept], None)

    face_ranks = row_rank[facets[col_perm]].astype(np.int32)
    face_ranks.sort(axis=1)
    mk = kept.size
    col_starts = np.arange(mk + 1, dtype=np.int64) * (q1 + 1)
    col_low = reduce_columns(
        m0, col_starts, face_ranks.reshape(-1), np.arange(mk, dtype=np.int64)
    )
    hit = np.flatnonzero(col_low >= 0)
    return row_perm[col_low[hit]], kept[col_perm[hit]]


def _complex_pairs(cx: FilteredComplex, max_dim: int, member_per_dim=None):
    """Pivot pairs of every boundary block up to dimension max_dim + 1."""
    top = min(cx.top_dim, max_dim + 1)
    blocks = {}
    cone = _cone_structures(cx) if top >= 1 else None
    for q1 in range(top, 0, -1):
        member = member_per_dim[q1 - 1] if member_per_dim is not None else None
        blocks[q1] = _block_pairs(cx, q1, member, cone)
    return blocks


# ---------------------------------------------------------------------------
# Diagrams
# ---------------------------------------------------------------------------

def _emit(pairs_out, q, births, deaths):
    for b, d in zip(births, deaths):
        if b < d:
            pairs_out.append(PersistencePair(q, float(b), float(d)))


def _leftover_values(base: np.ndarray, *removed) -> np.ndarray:
    """Multiset difference of value arrays; the removed parts must embed."""
    parts = [r for r in removed if r.size]
    if not parts:
        return base
    rem = np.concatenate(parts)
    vals, counts = np.unique(base, return_counts=True)
    rvals, rcounts = np.unique(rem, return_counts=True)
    pos = np.searchsorted(vals, rvals)
    if not np.all(pos < vals.size) or not np.array_equal(vals[np.minimum(pos, vals.size - 1)], rvals):
        raise AssertionError("pairing accounting out of sync")
    counts[pos] -= rcounts
    if np.any(counts < 0):
        raise AssertionError("pairing accounting out of sync")
    return np.repeat(vals, counts)


def diagram(cx: FilteredComplex, max_dim: int) -> PersistenceDiagram:
    """Persistence diagram of the sublevel filtration, dimensions 0..max_dim.

    Zero-length pairs are dropped; unpaired cycle creators die at +inf.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    blocks = _complex_pairs(cx, max_dim)
    none = (np.empty(0, np.int64), np.empty(0, np.int64))
    out = []
    for q in range(max_dim + 1):
        m = cx.count(q)
        if m == 0:
            continue
        vals = cx.dim_values[q]
        rows_up, cols_up = blocks.get(q + 1, none)
        if rows_up.size:
            _emit(out, q, vals[rows_up], cx.dim_values[q + 1][cols_up])
        # essential births as a value multiset: creators are the q-simplices
        # that are not death columns, and pair rows are always creators, so
        # subtracting both multisets from all values leaves the essentials
        killed = vals[blocks[q][1]] if q > 0 and q in blocks else np.empty(0)
        for b in _leftover_values(vals, killed, vals[rows_up]):
            out.append(PersistencePair(q, float(b), math.inf))
    return PersistenceDiagram(out)


def _image_reduction(pair: NestedPair, max_dim: int):
    """Finite image pairs and per-dimension essential births of a nested pair."""
    X, Y = pair.small, pair.large
    member = []
    for d in range(Y.top_dim + 1):
        mask = np.zeros(Y.count(d), dtype=bool)
        if d <= X.top_dim and X.count(d):
            mask[Y.locate(d, X.dim_simplices[d])] = True
        member.append(mask)

    yblocks = _complex_pairs(Y, max_dim, member)
    xblocks = _complex_pairs(X, max_dim - 1) if max_dim >= 1 else {}
    none = (np.empty(0, np.int64), np.empty(0, np.int64))

    finite = []
    essential = [np.empty(0, np.float64) for _ in range(max_dim + 1)]
    for q in range(max_dim + 1):
        mx = X.count(q) if q <= X.top_dim else 0
        if mx == 0:
            continue
        rows_up, cols_up = yblocks.get(q + 1, none)
        matched_values = np.empty(0, np.float64)
        if rows_up.size:
            in_x = member[q][rows_up]
            matched_values = Y.dim_values[q][rows_up[in_x]]
            _emit(finite, q, matched_values, Y.dim_values[q + 1][cols_up[in_x]])
        xvals = X.dim_values[q]
        killed = xvals[xblocks[q][1]] if q > 0 and q in xblocks else np.empty(0)
        essential[q] = _leftover_values(xvals, killed, matched_values)
    return finite, essential


def image_diagram(pair: NestedPair, max_dim: int) -> PersistenceDiagram:
    """Diagram of the image persistence module of a nested pair.

    For positions i <= j on the grid of distinct filtration values, with
    r(i, j) the rank of H_q(K_{a_i}) -> H_q(K'_{a_j}), the multiplicity of the
    point (a_i, a_j) is r(i, j-1) - r(i, j) - r(i-1, j-1) + r(i-1, j), and
    essential points at a_i have multiplicity r(i, n) - r(i-1, n).  This
    function realizes those multiplicities by sparse reduction; see
    ``rank_oracle`` for the dense route.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    finite, essential = _image_reduction(pair, max_dim)
    out = list(finite)
    for q, births in enumerate(essential):
        out.extend(PersistencePair(q, b, math.inf) for b in births)
    return PersistenceDiagram(out)


def betti_numbers(pair: NestedPair, max_dim: int) -> list[int]:
    """Ranks of H_q(K) -> H_q(K') at full scale for q = 0..max_dim."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    _, essential = _image_reduction(pair, max_dim)
    return [len(b) for b in essential]


# ---------------------------------------------------------------------------
# Dense rank oracle
# ---------------------------------------------------------------------------

def _dense_boundary(cx: FilteredComplex, q: int) -> np.ndarray:
    """Dense bool matrix of the boundary map from q-simplices to (q-1)-simplices."""
    m = cx.count(q)
    r = cx.count(q - 1) if q >= 1 else 0
    M = np.zeros((r, m), dtype=bool)
    if q == 0 or m == 0 or r == 0:
        return M
    simp = cx.dim_simplices[q]
    for drop in range(q + 1):
        facet = np.delete(simp, drop, axis=1)
        local = cx.locate(q - 1, facet)
        if np.any(local < 0):
            raise ValueError("complex is not closed under faces")
        M[local, np.arange(m)] = True
    return M


def rank_oracle(pair: NestedPair, q: int, alpha: float, beta: float) -> int:
    """Rank of the composite H_q(K_alpha) -> H_q(K'_beta) over Z/2.

    Computed from explicit cycle and boundary bases on the sublevel
    sub-complexes: the rank of [cycles of K_alpha | boundaries of K'_beta]
    minus the rank of the boundaries alone.
    """
    if q < 0:
        raise ValueError("homology dimension must be >= 0")
    if alpha > beta:
        raise ValueError("need alpha <= beta")
    Ka = pair.small.sublevel(alpha)
    Kb = pair.large.sublevel(beta)
    m_a = Ka.count(q)
    if m_a == 0:
        return 0
    m_b = Kb.count(q)

    if q == 0:
        cycles = np.eye(m_a, dtype=bool)
    else:
        cycles = gf2_nullspace(_dense_boundary(Ka, q))
    if cycles.shape[0] == 0:
        return 0

    # embed cycles of K_alpha into the q-chains of K'_beta
    col_map = Kb.locate(q, Ka.dim_simplices[q])
    if np.any(col_map < 0):
        raise ValueError("sublevel inclusion violated; nested pair invalid")
    embedded = np.zeros((cycles.shape[0], m_b), dtype=bool)
    embedded[:, col_map] = cycles

    boundaries = _dense_boundary(Kb, q + 1).T  # rows are boundary vectors
    rank_b = gf2_rank(boundaries)
    stacked = np.vstack([embedded, boundaries]) if boundaries.size else embedded
    return gf2_rank(stacked) - rank_b
