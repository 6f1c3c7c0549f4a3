"""Dense Z/2 linear algebra on bit-packed vectors.

Backs the rank oracle: deliberately a separate route from the sparse column
reduction in ``_kernels`` so the two can check each other.
"""
from __future__ import annotations

import numpy as np

__all__ = ["pack_rows_bool", "gf2_rank", "gf2_nullspace"]


def pack_rows_bool(M: np.ndarray) -> np.ndarray:
    """Pack a bool matrix row-wise into uint64 words (little-endian bits)."""
    M = np.ascontiguousarray(M, dtype=np.uint8)
    if M.ndim != 2:
        raise ValueError("expected a 2-d bool matrix")
    r, c = M.shape
    w = max(1, (c + 63) // 64)
    bits = np.packbits(M, axis=1, bitorder="little") if c else np.zeros((r, 0), np.uint8)
    padded = np.zeros((r, w * 8), dtype=np.uint8)
    padded[:, : bits.shape[1]] = bits
    return padded.view(np.uint64)


def gf2_rank(M: np.ndarray) -> int:
    """Rank over Z/2 of a bool matrix (rows are vectors)."""
    if M.size == 0:
        return 0
    R = pack_rows_bool(M)
    v, w = R.shape
    nbits = M.shape[1]
    top = 0
    for bit in range(nbits):
        wj, bj = divmod(bit, 64)
        mask = np.uint64(1) << np.uint64(bj)
        sub = R[top:, wj] & mask
        nz = np.flatnonzero(sub)
        if nz.size == 0:
            continue
        p = top + int(nz[0])
        if p != top:
            R[[top, p]] = R[[p, top]]
        hit = top + 1 + np.flatnonzero((R[top + 1 :, wj] & mask) != 0)
        if hit.size:
            R[hit] ^= R[top]
        top += 1
        if top == v:
            break
    return top


def _highest_bit(packed: np.ndarray) -> int:
    for w in range(packed.shape[0] - 1, -1, -1):
        word = int(packed[w])
        if word:
            return (w << 6) + word.bit_length() - 1
    return -1


def gf2_nullspace(M: np.ndarray) -> np.ndarray:
    """Basis of the kernel of M over Z/2: rows x with M @ x = 0 (mod 2).

    Returns a (z, m) bool matrix for an (r, m) input.
    """
    M = np.asarray(M, dtype=bool)
    r, m = M.shape
    if m == 0:
        return np.zeros((0, 0), dtype=bool)
    cols = pack_rows_bool(M.T)  # (m, wr): column j of M over r bits
    track = pack_rows_bool(np.eye(m, dtype=bool))  # (m, wm)
    pivots: dict[int, int] = {}
    null_rows = []
    for j in range(m):
        col = cols[j].copy()
        trk = track[j].copy()
        while True:
            b = _highest_bit(col)
            if b < 0:
                null_rows.append(trk)
                break
            p = pivots.get(b)
            if p is None:
                pivots[b] = j
                cols[j] = col
                track[j] = trk
                break
            col ^= cols[p]
            trk ^= track[p]
    if not null_rows:
        return np.zeros((0, m), dtype=bool)
    packed = np.vstack(null_rows)
    bytes_ = packed.view(np.uint8)
    bits = np.unpackbits(bytes_, axis=1, bitorder="little")[:, :m]
    return bits.astype(bool)
