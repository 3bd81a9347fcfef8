"""Pure Python / numpy versions of the hot loops (used when the extension is absent)."""

from itertools import combinations, product

import numpy as np

from .lattice import det


def _gcd_of_minors(cols, rank):
    # cols: list of weight vectors (each length rank); gcd of maximal minors.
    g = 0
    for cs in combinations(range(len(cols)), rank):
        d = det([[cols[c][k] for c in cs] for k in range(rank)])
        g = np.gcd(g, d)
        if g == 1:
            return 1
    return int(g)


def all_selections_unimodular(rank, factors):
    """True iff every choice of one weight per factor has maximal-minor gcd 1."""
    if rank > len(factors):
        return False
    for sel in product(*factors):
        if _gcd_of_minors(sel, rank) != 1:
            return False
    return True


def fixed_element_mod_p(rank, factors, p):
    """A nonzero t in (Z/p)^rank pairing to 0 with some weight of every factor."""
    W = [np.array(f, dtype=np.int64).reshape(-1, rank) % p for f in factors]
    for t in product(range(p), repeat=rank):
        if not any(t):
            continue
        tv = np.array(t, dtype=np.int64)
        if all(((w @ tv) % p == 0).any() for w in W):
            return list(t)
    return None


def batch_selection_free(weights, factor_sizes):
    """Vectorized is_free for many actions of rank 1, 2 or 3.

    weights: int array (N, ncoords, rank). Returns a bool array of length N.
    """
    W = np.asarray(weights, dtype=np.int64)
    N, ncoords, rank = W.shape
    k = len(factor_sizes)
    ok = np.ones(N, dtype=bool)
    if rank > k:
        return np.zeros(N, dtype=bool)
    starts = np.cumsum([0] + list(factor_sizes))[:-1]
    for choice in product(*[range(s) for s in factor_sizes]):
        sel = W[:, [st + c for st, c in zip(starts, choice)], :]  # (N, k, rank)
        g = np.zeros(N, dtype=np.int64)
        for cs in combinations(range(k), rank):
            g = np.gcd(g, _det_batch(sel[:, list(cs), :]))
        ok &= g == 1
    return ok


def _det_batch(M):
    # M: (N, r, r) with r <= 3, exact in int64.
    r = M.shape[1]
    if r == 1:
        return M[:, 0, 0]
    if r == 2:
        return M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    if r == 3:
        a = M
        return (a[:, 0, 0] * (a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1])
                - a[:, 0, 1] * (a[:, 1, 0] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 0])
                + a[:, 0, 2] * (a[:, 1, 0] * a[:, 2, 1] - a[:, 1, 1] * a[:, 2, 0]))
    raise ValueError("batch determinants only for rank <= 3")


def cubic_row_search(T1, T2, bound, eps, prefixes):
    """Rows r_0..r_{n-1} in [-bound, bound]^n with T2(r_i, r_j, r_k) = eps T1[i][j][k].

    ``prefixes[k]`` is the set of allowed mod-2 codes of the first k rows
    (each row a base-2 number, rows concatenated). Returns a list of row tuples.
    """
    T1 = np.asarray(T1, dtype=np.int64)
    T2 = np.asarray(T2, dtype=np.int64)
    n = T1.shape[0]
    V = np.array(list(product(range(-bound, bound + 1), repeat=n)), dtype=np.int64)
    codes = (V % 2) @ (1 << np.arange(n - 1, -1, -1))
    VQ = np.einsum("abc,va->vbc", T2, V)  # T2(v, ., .)
    mu = np.einsum("vbc,vb,vc->v", VQ, V, V)
    allowed = [np.array(sorted(p), dtype=np.int64) for p in prefixes]
    out = []

    def extend(rows, idxs, prefix):
        k = len(rows)
        if k == n:
            out.append(tuple(tuple(int(x) for x in r) for r in rows))
            return
        mask = mu == eps * T1[k, k, k]
        for i in range(k):
            Qi = VQ[idxs[i]]
            mask &= ((V @ Qi) * V).sum(1) == eps * T1[i, k, k]
            for j in range(i, k):
                mask &= V @ (Qi @ rows[j]) == eps * T1[i, j, k]
        full = (prefix << n) + codes
        mask &= np.isin(full, allowed[k + 1])
        for idx in np.nonzero(mask)[0]:
            extend(rows + [V[idx]], idxs + [idx], int(full[idx]))

    extend([], [], 0)
    return out
