"""Hot inner loops: Z/2 column reduction, clique expansion, bipartite matching.

Each kernel ships in two flavors sharing one contract: a loop implementation
compiled with numba when enabled, and a pure-NumPy fallback.  The public names
at the bottom dispatch on the ``TOPOFIELD_NUMBA`` flag (see ``_accel``);
``benchmarks/bench_kernels.py`` times the two paths against each other.
"""
from __future__ import annotations

import numpy as np

from ._accel import NUMBA_ENABLED, jit

__all__ = ["reduce_columns", "cone_discard", "expand_cliques", "matching_saturates"]


# ---------------------------------------------------------------------------
# Z/2 boundary-matrix reduction (twist order with clearing)
# ---------------------------------------------------------------------------

def _reduce_columns_loop(n_rows, col_starts, col_rows, process_order, skip):
    n_cols = col_starts.shape[0] - 1
    col_low = np.full(n_cols, -1, np.int64)
    pivot_owner = np.full(n_rows, -1, np.int64)

    red_start = np.zeros(n_cols, np.int64)
    red_len = np.zeros(n_cols, np.int64)
    cap = max(col_rows.shape[0], 64)
    pool = np.empty(cap, np.int32)
    pool_len = 0

    cur = np.empty(n_rows, np.int32)
    tmp = np.empty(n_rows, np.int32)

    for t in range(process_order.shape[0]):
        c = process_order[t]
        if skip[c]:
            continue
        s, e = col_starts[c], col_starts[c + 1]
        L = e - s
        for i in range(L):
            cur[i] = col_rows[s + i]
        while L > 0:
            low = cur[L - 1]
            o = pivot_owner[low]
            if o < 0:
                pivot_owner[low] = c
                col_low[c] = low
                if pool_len + L > cap:
                    new_cap = cap
                    while pool_len + L > new_cap:
                        new_cap *= 2
                    new_pool = np.empty(new_cap, np.int32)
                    new_pool[:pool_len] = pool[:pool_len]
                    pool = new_pool
                    cap = new_cap
                red_start[c] = pool_len
                red_len[c] = L
                for i in range(L):
                    pool[pool_len + i] = cur[i]
                pool_len += L
                break
            # symmetric difference of cur[:L] with the stored column of o
            os_, ol = red_start[o], red_len[o]
            i = 0
            j = 0
            m = 0
            while i < L and j < ol:
                a = cur[i]
                b = pool[os_ + j]
                if a < b:
                    tmp[m] = a
                    i += 1
                    m += 1
                elif b < a:
                    tmp[m] = b
                    j += 1
                    m += 1
                else:
                    i += 1
                    j += 1
            while i < L:
                tmp[m] = cur[i]
                i += 1
                m += 1
            while j < ol:
                tmp[m] = pool[os_ + j]
                j += 1
                m += 1
            cur, tmp = tmp, cur
            L = m
    return col_low


def _reduce_columns_numpy(n_rows, col_starts, col_rows, process_order, skip):
    n_cols = col_starts.shape[0] - 1
    col_low = np.full(n_cols, -1, np.int64)
    pivot_owner = np.full(n_rows, -1, np.int64)
    stored: dict[int, np.ndarray] = {}

    for c in process_order:
        c = int(c)
        if skip[c]:
            continue
        cur = col_rows[col_starts[c]:col_starts[c + 1]].copy()
        while cur.size:
            low = int(cur[-1])
            o = pivot_owner[low]
            if o < 0:
                pivot_owner[low] = c
                col_low[c] = low
                stored[c] = cur
                break
            cur = np.setxor1d(cur, stored[int(o)], assume_unique=True)
    return col_low


def _cone_discard_loop(adj_words, rank_rows, min_rank):
    """True for simplices having a neighbor of all vertices that precedes the
    whole simplex in the (value, index) vertex order: their boundary columns
    are cone-redundant."""
    m, k = rank_rows.shape
    out = np.zeros(m, np.bool_)
    ones = ~np.uint64(0)
    for i in range(m):
        r0 = min_rank[i]
        wl = r0 >> 6
        bl = r0 & 63
        for w in range(wl + 1):
            word = adj_words[rank_rows[i, 0], w]
            for j in range(1, k):
                word &= adj_words[rank_rows[i, j], w]
            if w == wl:
                if bl == 0:
                    word = np.uint64(0)
                else:
                    word &= ones >> np.uint64(64 - bl)
            if word != np.uint64(0):
                out[i] = True
                break
    return out


def _cone_discard_numpy(adj_bool, rank_rows, min_rank):
    m, k = rank_rows.shape
    out = np.zeros(m, bool)
    for i in range(m):
        row = adj_bool[rank_rows[i, 0]]
        for j in range(1, k):
            row = row & adj_bool[rank_rows[i, j]]
        out[i] = bool(row[: min_rank[i]].any())
    return out


# ---------------------------------------------------------------------------
# Clique expansion over a packed-bitset adjacency matrix
# ---------------------------------------------------------------------------

def _popcount64(x):
    c = 0
    while x != np.uint64(0):
        x &= x - np.uint64(1)
        c += 1
    return c


def _ctz64(x):
    # trailing zeros of a nonzero uint64, branching by halves
    n = 0
    if x & np.uint64(0xFFFFFFFF) == np.uint64(0):
        n += 32
        x >>= np.uint64(32)
    if x & np.uint64(0xFFFF) == np.uint64(0):
        n += 16
        x >>= np.uint64(16)
    if x & np.uint64(0xFF) == np.uint64(0):
        n += 8
        x >>= np.uint64(8)
    if x & np.uint64(0xF) == np.uint64(0):
        n += 4
        x >>= np.uint64(4)
    if x & np.uint64(0x3) == np.uint64(0):
        n += 2
        x >>= np.uint64(2)
    if x & np.uint64(0x1) == np.uint64(0):
        n += 1
    return n


def _expand_cliques_loop(adj_words, simp):
    m, k = simp.shape
    nw = adj_words.shape[1]
    buf = np.empty(nw, np.uint64)
    ones = ~np.uint64(0)

    counts = np.zeros(m, np.int64)
    for i in range(m):
        for w in range(nw):
            buf[w] = adj_words[simp[i, 0], w]
        for j in range(1, k):
            v = simp[i, j]
            for w in range(nw):
                buf[w] &= adj_words[v, w]
        last = simp[i, k - 1]
        wl = last >> 6
        bl = last & 63
        for w in range(wl):
            buf[w] = np.uint64(0)
        if bl == 63:
            buf[wl] = np.uint64(0)
        else:
            buf[wl] &= ones << np.uint64(bl + 1)
        c = 0
        for w in range(nw):
            c += _popcount64(buf[w])
        counts[i] = c

    total = 0
    for i in range(m):
        total += counts[i]
    out = np.empty((total, k + 1), np.int32)
    pos = 0
    for i in range(m):
        if counts[i] == 0:
            continue
        for w in range(nw):
            buf[w] = adj_words[simp[i, 0], w]
        for j in range(1, k):
            v = simp[i, j]
            for w in range(nw):
                buf[w] &= adj_words[v, w]
        last = simp[i, k - 1]
        wl = last >> 6
        bl = last & 63
        for w in range(wl):
            buf[w] = np.uint64(0)
        if bl == 63:
            buf[wl] = np.uint64(0)
        else:
            buf[wl] &= ones << np.uint64(bl + 1)
        for w in range(nw):
            word = buf[w]
            while word != np.uint64(0):
                b = _ctz64(word)
                for j in range(k):
                    out[pos, j] = simp[i, j]
                out[pos, k] = (w << 6) + b
                pos += 1
                word &= word - np.uint64(1)
    return out


def _expand_cliques_numpy(adj_bool, simp):
    m, k = simp.shape
    chunks = []
    for i in range(m):
        row = adj_bool[simp[i, 0]]
        for j in range(1, k):
            row = row & adj_bool[simp[i, j]]
        cand = np.flatnonzero(row)
        cand = cand[cand > simp[i, k - 1]]
        if cand.size:
            block = np.empty((cand.size, k + 1), np.int32)
            block[:, :k] = simp[i]
            block[:, k] = cand
            chunks.append(block)
    if not chunks:
        return np.empty((0, k + 1), np.int32)
    return np.concatenate(chunks, axis=0)


def _pack_adjacency(adj_bool: np.ndarray) -> np.ndarray:
    n = adj_bool.shape[0]
    nw = (n + 63) // 64
    bits = np.packbits(adj_bool, axis=1, bitorder="little")
    padded = np.zeros((n, nw * 8), dtype=np.uint8)
    padded[:, : bits.shape[1]] = bits
    return padded.view(np.uint64)


# ---------------------------------------------------------------------------
# Bipartite matching feasibility (Kuhn augmenting paths, iterative)
# ---------------------------------------------------------------------------

def _matching_saturates_loop(cost, thr):
    a, b = cost.shape
    if a == 0:
        return True
    if b == 0:
        return False
    match_of_col = np.full(b, -1, np.int64)
    visited = np.zeros(b, np.bool_)
    srow = np.empty(a + 1, np.int64)
    scol = np.empty(a + 1, np.int64)
    spick = np.empty(a + 1, np.int64)

    for r0 in range(a):
        for i in range(b):
            visited[i] = False
        top = 0
        srow[0] = r0
        scol[0] = 0
        augmented = False
        while top >= 0:
            r = srow[top]
            ci = scol[top]
            descended = False
            free_col = -1
            while ci < b:
                if not visited[ci] and cost[r, ci] <= thr:
                    visited[ci] = True
                    occ = match_of_col[ci]
                    if occ < 0:
                        free_col = ci
                        break
                    scol[top] = ci + 1
                    spick[top] = ci
                    top += 1
                    srow[top] = occ
                    scol[top] = 0
                    descended = True
                    break
                ci += 1
            if free_col >= 0:
                match_of_col[free_col] = srow[top]
                t = top - 1
                while t >= 0:
                    match_of_col[spick[t]] = srow[t]
                    t -= 1
                augmented = True
                break
            if descended:
                continue
            top -= 1
        if not augmented:
            return False
    return True


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    _reduce_columns_jit = jit(_reduce_columns_loop)
    _popcount64 = jit(_popcount64)
    _ctz64 = jit(_ctz64)
    _expand_cliques_jit = jit(_expand_cliques_loop)
    _matching_saturates_jit = jit(_matching_saturates_loop)
    _cone_discard_jit = jit(_cone_discard_loop)


def reduce_columns(n_rows, col_starts, col_rows, process_order, skip=None,
                   force_numpy=False):
    """Reduce Z/2 columns; returns the pivot row per column (-1 if zero).

    Columns are CSR slices of ``col_rows`` (row ids sorted ascending within a
    column) processed in ``process_order``; ``skip`` marks columns known to
    reduce to zero (clearing), which are left untouched.
    """
    n_cols = col_starts.shape[0] - 1
    if skip is None:
        skip = np.zeros(n_cols, dtype=bool)
    args = (np.int64(n_rows), col_starts, col_rows, process_order, skip)
    if NUMBA_ENABLED and not force_numpy:
        return _reduce_columns_jit(*args)
    return _reduce_columns_numpy(*args)


def cone_discard(adj_rank_bool, rank_rows, min_rank, force_numpy=False):
    """Mark simplices coned off by a neighbor preceding all their vertices.

    Vertices are identified by their rank in the (value, index) order and
    ``adj_rank_bool`` is the 1-skeleton adjacency in that relabeling.  For a
    marked simplex the boundary equals the boundary sum of the cone
    simplices, whose minimum vertex rank is strictly smaller, so dropping its
    column preserves the span of every value-prefix of the block.
    """
    rank_rows = np.ascontiguousarray(rank_rows, dtype=np.int32)
    min_rank = np.ascontiguousarray(min_rank, dtype=np.int32)
    if rank_rows.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if NUMBA_ENABLED and not force_numpy:
        return _cone_discard_jit(_pack_adjacency(adj_rank_bool), rank_rows, min_rank)
    return _cone_discard_numpy(adj_rank_bool, rank_rows, min_rank)


def expand_cliques(adj_bool, simp, force_numpy=False):
    """All extensions of each k-clique by one vertex larger than its maximum."""
    simp = np.ascontiguousarray(simp, dtype=np.int32)
    if simp.shape[0] == 0:
        return np.empty((0, simp.shape[1] + 1), np.int32)
    if NUMBA_ENABLED and not force_numpy:
        return _expand_cliques_jit(_pack_adjacency(adj_bool), simp)
    return _expand_cliques_numpy(adj_bool, simp)


def matching_saturates(cost, thr, force_numpy=False):
    """Whether every row of ``cost`` can be matched to a column with cost <= thr."""
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    if NUMBA_ENABLED and not force_numpy:
        return bool(_matching_saturates_jit(cost, np.float64(thr)))
    return bool(_matching_saturates_loop(cost, float(thr)))
