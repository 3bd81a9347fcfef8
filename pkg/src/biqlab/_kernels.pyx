# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in _kernels_py.

Inputs outside the ranges where 64-bit arithmetic is provably exact
(rank > 3 or large weights) are handed to the pure implementation.
"""

import numpy as np
cimport numpy as cnp

from . import _kernels_py

cdef long long LIMIT = 1 << 16


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef long long _minors_gcd(long long[:, :] sel, int k, int r) nogil:
    # sel: k rows (weights) of length r; gcd of r x r minors.
    cdef long long g = 0, d
    cdef int i, j, l
    if r == 1:
        for i in range(k):
            g = _gcd(g, sel[i, 0])
        return g
    if r == 2:
        for i in range(k):
            for j in range(i + 1, k):
                d = sel[i, 0] * sel[j, 1] - sel[i, 1] * sel[j, 0]
                g = _gcd(g, d)
                if g == 1:
                    return 1
        return g
    for i in range(k):
        for j in range(i + 1, k):
            for l in range(j + 1, k):
                d = (sel[i, 0] * (sel[j, 1] * sel[l, 2] - sel[j, 2] * sel[l, 1])
                     - sel[i, 1] * (sel[j, 0] * sel[l, 2] - sel[j, 2] * sel[l, 0])
                     + sel[i, 2] * (sel[j, 0] * sel[l, 1] - sel[j, 1] * sel[l, 0]))
                g = _gcd(g, d)
                if g == 1:
                    return 1
    return g


def _flatten(factors, rank):
    sizes = [len(f) for f in factors]
    flat = np.array([w for f in factors for w in f], dtype=np.int64).reshape(-1, rank)
    return flat, np.array(sizes, dtype=np.int64)


def _small(flat):
    return flat.size == 0 or int(np.abs(flat).max()) < LIMIT


def all_selections_unimodular(int rank, factors):
    if rank > len(factors):
        return False
    flat, sizes = _flatten(factors, rank)
    if rank > 3 or rank < 1 or not _small(flat):
        return _kernels_py.all_selections_unimodular(rank, factors)
    cdef long long[:, :] W = flat
    cdef long long[:] S = sizes
    cdef int k = len(factors)
    cdef long long[:] starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
    cdef long long[:] choice = np.zeros(k, dtype=np.int64)
    cdef long long[:, :] sel = np.zeros((k, rank), dtype=np.int64)
    cdef int i, c, pos
    while True:
        for i in range(k):
            for c in range(rank):
                sel[i, c] = W[starts[i] + choice[i], c]
        if _minors_gcd(sel, k, rank) != 1:
            return False
        pos = k - 1
        while pos >= 0:
            choice[pos] += 1
            if choice[pos] < S[pos]:
                break
            choice[pos] = 0
            pos -= 1
        if pos < 0:
            return True


def fixed_element_mod_p(int rank, factors, long long p):
    flat, sizes = _flatten(factors, rank)
    if rank > 3 or rank < 1 or not _small(flat) or p >= LIMIT:
        return _kernels_py.fixed_element_mod_p(rank, factors, p)
    cdef long long[:, :] W = np.mod(flat, p)
    cdef long long[:] S = sizes
    cdef int k = len(factors)
    cdef long long[:] t = np.zeros(rank, dtype=np.int64)
    cdef int i, j, c, pos, start, hit
    cdef long long acc
    cdef bint fixes
    while True:
        pos = rank - 1
        while pos >= 0:
            t[pos] += 1
            if t[pos] < p:
                break
            t[pos] = 0
            pos -= 1
        if pos < 0:
            return None
        fixes = True
        start = 0
        for i in range(k):
            hit = 0
            for j in range(start, start + S[i]):
                acc = 0
                for c in range(rank):
                    acc += W[j, c] * t[c]
                if acc % p == 0:
                    hit = 1
                    break
            start += S[i]
            if not hit:
                fixes = False
                break
        if fixes:
            return [int(t[c]) for c in range(rank)]


def batch_selection_free(weights, factor_sizes):
    arr = np.ascontiguousarray(weights, dtype=np.int64)
    cdef int N = arr.shape[0], rank = arr.shape[2]
    cdef int k = len(factor_sizes)
    if rank > k:
        return np.zeros(N, dtype=bool)
    if rank > 3 or not _small(arr):
        return _kernels_py.batch_selection_free(weights, factor_sizes)
    cdef long long[:, :, :] W = arr
    sizes = np.array(factor_sizes, dtype=np.int64)
    cdef long long[:] S = sizes
    cdef long long[:] starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
    out = np.ones(N, dtype=np.uint8)
    cdef unsigned char[:] ok = out
    cdef long long[:] choice = np.zeros(k, dtype=np.int64)
    cdef long long[:, :] sel = np.zeros((k, rank), dtype=np.int64)
    cdef int n, i, c, pos
    for n in range(N):
        for i in range(k):
            choice[i] = 0
        while True:
            for i in range(k):
                for c in range(rank):
                    sel[i, c] = W[n, starts[i] + choice[i], c]
            if _minors_gcd(sel, k, rank) != 1:
                ok[n] = 0
                break
            pos = k - 1
            while pos >= 0:
                choice[pos] += 1
                if choice[pos] < S[pos]:
                    break
                choice[pos] = 0
                pos -= 1
            if pos < 0:
                break
    return out.astype(bool)


cdef inline long long _t3(long long[:, :, :] T, long long[:] x, long long[:] y,
                          long long[:] z, int n) nogil:
    cdef long long s = 0
    cdef int a, b, c
    for a in range(n):
        if x[a] == 0:
            continue
        for b in range(n):
            if y[b] == 0:
                continue
            for c in range(n):
                s += T[a, b, c] * x[a] * y[b] * z[c]
    return s


def cubic_row_search(T1, T2, int bound, int eps, prefixes):
    t1 = np.asarray(T1, dtype=np.int64)
    t2 = np.asarray(T2, dtype=np.int64)
    cdef int n = t1.shape[0]
    if n > 3 or bound > 64 or int(np.abs(t2).max(initial=0)) > LIMIT:
        return _kernels_py.cubic_row_search(T1, T2, bound, eps, prefixes)
    cdef long long[:, :, :] A = t1
    cdef long long[:, :, :] B = t2
    vecs = np.array(np.meshgrid(*[np.arange(-bound, bound + 1)] * n, indexing="ij"),
                    dtype=np.int64).reshape(n, -1).T.copy()
    cdef long long[:, :] V = vecs
    cdef int nv = vecs.shape[0]
    cdef long long[:] mu = np.einsum("abc,va,vb,vc->v", t2, vecs, vecs, vecs)
    cdef long long[:] code = ((vecs % 2) @ (1 << np.arange(n - 1, -1, -1))).astype(np.int64)
    allowed = np.zeros((n + 1, 1 << (n * n)), dtype=np.uint8)
    for k in range(n + 1):
        for c in prefixes[k]:
            allowed[k, c] = 1
    cdef unsigned char[:, :] ok = allowed
    cdef long long[:] idx = np.zeros(n, dtype=np.int64)
    cdef long long[:] pre = np.zeros(n + 1, dtype=np.int64)
    out = []
    cdef int depth = 0, i, j
    cdef long long v, full
    cdef bint good
    idx[0] = -1
    while depth >= 0:
        idx[depth] += 1
        if idx[depth] >= nv:
            depth -= 1
            continue
        v = idx[depth]
        if mu[v] != eps * A[depth, depth, depth]:
            continue
        full = (pre[depth] << n) + code[v]
        if not ok[depth + 1, full]:
            continue
        good = True
        for i in range(depth):
            if _t3(B, V[idx[i]], V[v], V[v], n) != eps * A[i, depth, depth]:
                good = False
                break
            for j in range(i, depth):
                if _t3(B, V[idx[i]], V[idx[j]], V[v], n) != eps * A[i, j, depth]:
                    good = False
                    break
            if not good:
                break
        if not good:
            continue
        pre[depth + 1] = full
        if depth == n - 1:
            out.append(tuple(tuple(int(V[idx[r], c]) for c in range(n)) for r in range(n)))
        else:
            depth += 1
            idx[depth] = -1
    return out
