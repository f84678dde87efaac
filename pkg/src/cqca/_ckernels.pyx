# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) kernels; same signatures as the pure-Python module."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, uint8_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cnp.import_array()

cdef extern from *:
    int __builtin_clzll(unsigned long long) nogil


cdef int _echelon(uint64_t* rows, int k, int W, int n, long* out) nogil:
    """Column-by-column elimination in place; out[c] = rank of first c columns."""
    cdef int rank = 0, c, i, w, piv, wd
    cdef uint64_t bit, tmp
    out[0] = 0
    for c in range(n):
        wd = c >> 6
        bit = (<uint64_t>1) << (c & 63)
        piv = -1
        for i in range(rank, k):
            if rows[i * W + wd] & bit:
                piv = i
                break
        if piv >= 0:
            if piv != rank:
                for w in range(W):
                    tmp = rows[piv * W + w]
                    rows[piv * W + w] = rows[rank * W + w]
                    rows[rank * W + w] = tmp
            for i in range(rank + 1, k):
                if rows[i * W + wd] & bit:
                    for w in range(wd, W):
                        rows[i * W + w] ^= rows[rank * W + w]
            rank += 1
        out[c + 1] = rank
        if rank == k:
            for i in range(c + 2, n + 1):
                out[i] = rank
            break
    return rank


cdef void _pack(const uint8_t[:, :] bits, uint64_t* rows, int W, int col0) nogil:
    """Pack with columns rotated left by col0."""
    cdef int k = bits.shape[0], n = bits.shape[1], i, c, cc
    memset(rows, 0, k * W * sizeof(uint64_t))
    for i in range(k):
        for c in range(n):
            cc = c - col0
            if cc < 0:
                cc += n
            if bits[i, c]:
                rows[i * W + (cc >> 6)] |= (<uint64_t>1) << (cc & 63)


def prefix_ranks(bits):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] arr = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int k = arr.shape[0], n = arr.shape[1]
    cdef int W = (n + 63) // 64
    out = np.zeros(n + 1, dtype=np.int64)
    cdef long[:] o = out
    if k == 0 or n == 0:
        return out
    cdef uint64_t* rows = <uint64_t*> malloc(k * W * sizeof(uint64_t))
    try:
        _pack(arr, rows, W, 0)
        _echelon(rows, k, W, n, &o[0])
    finally:
        free(rows)
    return out


def gf2_rank(bits):
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.size == 0:
        return 0
    return int(prefix_ranks(arr)[-1])


def cyclic_window_ranks(bits, int width=2):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] arr = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef int k = arr.shape[0], n = arr.shape[1]
    cdef int L = n // width, W = (n + 63) // 64, s, l
    R = np.zeros((L, L + 1), dtype=np.int64)
    cdef long[:, :] r = R
    if k == 0:
        return R
    cdef uint64_t* rows = <uint64_t*> malloc(k * W * sizeof(uint64_t))
    cdef long* pr = <long*> malloc((n + 1) * sizeof(long))
    try:
        for s in range(L):
            _pack(arr, rows, W, s * width)
            _echelon(rows, k, W, n, pr)
            for l in range(L + 1):
                r[s, l] = pr[l * width]
    finally:
        free(rows)
        free(pr)
    return R


cdef inline uint64_t _rot(uint64_t x, int e, int m, uint64_t mask) nogil:
    if e == 0:
        return x
    return ((x << e) | (x >> (m - e))) & mask


def recurrence_search(terms, int n, int m, long long budget):
    if m > 64:
        from . import _pykernels
        return _pykernels.recurrence_search(terms, n, m, budget)
    cdef int nt = len(terms), idx, i, j, kk, e
    cdef uint64_t mask = (<uint64_t>-1) if m == 64 else (((<uint64_t>1) << m) - 1)
    cdef int* ti = <int*> malloc(nt * sizeof(int))
    cdef int* tk = <int*> malloc(nt * sizeof(int))
    cdef int* te = <int*> malloc(nt * sizeof(int))
    cdef uint64_t* P = <uint64_t*> malloc(n * n * sizeof(uint64_t))
    cdef uint64_t* Q = <uint64_t*> malloc(n * n * sizeof(uint64_t))
    cdef uint64_t* tmp
    cdef uint64_t x
    cdef long long t = 1
    cdef int ok, d = 0
    try:
        for idx, (i, kk, e) in enumerate(terms):
            ti[idx] = i
            tk[idx] = kk
            te[idx] = e
        with nogil:
            memset(P, 0, n * n * sizeof(uint64_t))
            for idx in range(nt):
                P[ti[idx] * n + tk[idx]] ^= (<uint64_t>1) << te[idx]
            while True:
                x = P[0]
                ok = x != 0 and (x & (x - 1)) == 0
                if ok:
                    for i in range(n):
                        for j in range(n):
                            if P[i * n + j] != (x if i == j else 0):
                                ok = 0
                                break
                        if not ok:
                            break
                if ok:
                    d = 0
                    while x > 1:
                        x >>= 1
                        d += 1
                    break
                if t >= budget:
                    t = 0
                    break
                memset(Q, 0, n * n * sizeof(uint64_t))
                for idx in range(nt):
                    i = ti[idx]
                    kk = tk[idx]
                    e = te[idx]
                    for j in range(n):
                        x = P[kk * n + j]
                        if x:
                            Q[i * n + j] ^= _rot(x, e, m, mask)
                tmp = P
                P = Q
                Q = tmp
                t += 1
    finally:
        free(ti)
        free(tk)
        free(te)
        free(P)
        free(Q)
    if t == 0:
        return 0, 0
    return int(t), d


cdef inline int _top_bit(uint64_t* v, int W) nogil:
    cdef int w
    cdef uint64_t x
    for w in range(W - 1, -1, -1):
        x = v[w]
        if x:
            return w * 64 + 63 - __builtin_clzll(x)
    return -1


cdef int _basis_rank(const uint64_t* cols, int W, const uint8_t* mask, uint8_t want, int L,
                     uint64_t* basis, uint8_t* used, uint64_t* v, int k) nogil:
    """Rank of the selected site columns via an XOR basis keyed by top bit."""
    cdef int x, b, w, h, rank = 0
    memset(used, 0, k)
    for x in range(L):
        if mask[x] != want:
            continue
        for b in range(2):
            for w in range(W):
                v[w] = cols[(2 * x + b) * W + w]
            while True:
                h = _top_bit(v, W)
                if h < 0:
                    break
                if not used[h]:
                    used[h] = 1
                    for w in range(W):
                        basis[h * W + w] = v[w]
                    rank += 1
                    break
                for w in range(W):
                    v[w] ^= basis[h * W + w]
            if rank == k:
                return rank
    return rank


def erasure_logical_dims(bits, erased):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] arr = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] er = np.ascontiguousarray(erased, dtype=np.int64)
    cdef int k = arr.shape[0], n = arr.shape[1], L = n // 2
    cdef int trials = er.shape[0], ne = er.shape[1], t, j, i, c, r_in, r_out, cnt
    cdef int W = (k + 63) // 64 if k else 1
    out = np.zeros(trials, dtype=np.int64)
    cdef long[:] o = out
    # column-major bit matrix: column c is W words, bit i = row i
    colarr = np.zeros((n, W), dtype=np.uint64)
    cdef cnp.uint64_t[:, :] cv = colarr
    for i in range(k):
        for c in range(n):
            if arr[i, c]:
                cv[c, i >> 6] |= (<uint64_t>1) << (i & 63)
    cdef uint8_t* mask = <uint8_t*> malloc(L)
    cdef uint64_t* basis = <uint64_t*> malloc((k if k else 1) * W * sizeof(uint64_t))
    cdef uint8_t* used = <uint8_t*> malloc(k if k else 1)
    cdef uint64_t* v = <uint64_t*> malloc(W * sizeof(uint64_t))
    cdef const uint64_t* cols = <const uint64_t*> &cv[0, 0]
    try:
        with nogil:
            for t in range(trials):
                memset(mask, 0, L)
                for j in range(ne):
                    mask[er[t, j] % L] = 1
                cnt = 0
                for j in range(L):
                    cnt += mask[j]
                r_in = _basis_rank(cols, W, mask, 1, L, basis, used, v, k) if k else 0
                r_out = _basis_rank(cols, W, mask, 0, L, basis, used, v, k) if k else 0
                o[t] = 2 * cnt - r_in - k + r_out
    finally:
        free(mask)
        free(basis)
        free(used)
        free(v)
    return out
