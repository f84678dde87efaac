"""Reference implementations of the hot loops (GF(2) ranks, residue powers).

Rows are packed into Python ints, so these work for any size; the compiled
module mirrors the same signatures with machine words.
"""
from __future__ import annotations

import numpy as np


def _pack_rows(bits: np.ndarray) -> list[int]:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 2:
        raise ValueError("expected a 2-d 0/1 array")
    if bits.shape[1] == 0:
        return [0] * bits.shape[0]
    # little-endian: column c -> bit c
    packed = np.packbits(bits, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def _prefix_ranks_rows(rows: list[int], n: int) -> np.ndarray:
    rows = [r for r in rows if r]
    out = np.zeros(n + 1, dtype=np.int64)
    rank = 0
    for c in range(n):
        bit = 1 << c
        piv = -1
        for i in range(rank, len(rows)):
            if rows[i] & bit:
                piv = i
                break
        if piv >= 0:
            rows[rank], rows[piv] = rows[piv], rows[rank]
            p = rows[rank]
            for i in range(rank + 1, len(rows)):
                if rows[i] & bit:
                    rows[i] ^= p
            rank += 1
        out[c + 1] = rank
    return out


def prefix_ranks(bits) -> np.ndarray:
    """out[c] = GF(2) rank of the first c columns of a 0/1 matrix."""
    bits = np.asarray(bits, dtype=np.uint8)
    return _prefix_ranks_rows(_pack_rows(bits), bits.shape[1])


def gf2_rank(bits) -> int:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size == 0:
        return 0
    return int(prefix_ranks(bits)[-1])


def cyclic_window_ranks(bits, width: int = 2) -> np.ndarray:
    """R[s, l] = rank of the columns of sites s..s+l-1 (cyclic), l = 0..L.

    Each site owns ``width`` consecutive columns.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.shape[1]
    L = n // width
    R = np.zeros((L, L + 1), dtype=np.int64)
    for s in range(L):
        rolled = np.roll(bits, -s * width, axis=1)
        R[s] = prefix_ranks(rolled)[::width]
    return R


def _rot(x: int, e: int, m: int, mask: int) -> int:
    if e == 0:
        return x
    return ((x << e) | (x >> (m - e))) & mask


def recurrence_search(terms, n: int, m: int, budget: int):
    """Smallest t <= budget with M^t = u^d * 1 modulo u^m - 1.

    ``terms`` lists (row, col, exponent mod m) monomials of M.  Returns
    (t, d), or (0, 0) when the budget runs out.
    """
    mask = (1 << m) - 1
    P = [[0] * n for _ in range(n)]
    for i, k, e in terms:
        P[i][k] ^= 1 << e
    by_row = [[] for _ in range(n)]
    for i, k, e in terms:
        by_row[i].append((k, e))
    t = 1
    while True:
        d = _scalar(P, n)
        if d is not None:
            return t, d
        if t >= budget:
            return 0, 0
        Q = []
        for i in range(n):
            row = [0] * n
            for k, e in by_row[i]:
                Pk = P[k]
                for j in range(n):
                    if Pk[j]:
                        row[j] ^= _rot(Pk[j], e, m, mask)
            Q.append(row)
        P = Q
        t += 1


def _scalar(P, n):
    x = P[0][0]
    if not x or x & (x - 1):
        return None
    for i in range(n):
        for j in range(n):
            if P[i][j] != (x if i == j else 0):
                return None
    return x.bit_length() - 1


def erasure_logical_dims(bits, erased) -> np.ndarray:
    """Logical dimension on each erased site set (one row of ``erased`` per trial)."""
    bits = np.asarray(bits, dtype=np.uint8)
    erased = np.asarray(erased, dtype=np.intp)
    k, n = bits.shape
    L = n // 2
    out = np.zeros(len(erased), dtype=np.int64)
    for t, sites in enumerate(erased):
        mask = np.zeros(L, bool)
        mask[sites] = True
        inside = np.flatnonzero(mask)
        outside = np.flatnonzero(~mask)
        cin = np.stack([2 * inside, 2 * inside + 1], axis=1).ravel()
        cout = np.stack([2 * outside, 2 * outside + 1], axis=1).ravel()
        r_in = gf2_rank(bits[:, cin]) if k and len(cin) else 0
        r_out = gf2_rank(bits[:, cout]) if k and len(cout) else 0
        out[t] = 2 * len(inside) - r_in - k + r_out
    return out
