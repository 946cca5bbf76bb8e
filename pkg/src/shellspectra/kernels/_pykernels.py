"""Pure Python/numpy implementations of the hot kernels.

These are the reference versions; the compiled module ``_ckernels`` exposes
the same functions with identical signatures and results.
"""
import itertools

import numpy as np
import scipy.sparse as sp


def triple_product_coo(ptr, dims, exps, table):
    """Nonzero ``c_{ijk}`` for ``i <= j <= k`` over a set of sparse indices.

    Parameters
    ----------
    ptr, dims, exps : int64 arrays
        CSR-like storage of the index set: index ``i`` has entries
        ``dims[ptr[i]:ptr[i+1]]`` (ascending) with exponents ``exps[...]``.
    table : (D, D, D) float array
        Univariate moments ``E[L_a L_b L_c]``.

    Returns
    -------
    i, j, k : int64 arrays and val : float64 array
    """
    n = len(ptr) - 1
    index = []
    lookup = {}
    for i in range(n):
        key = tuple(zip(dims[ptr[i]:ptr[i + 1]].tolist(), exps[ptr[i]:ptr[i + 1]].tolist()))
        index.append(dict(key))
        lookup[key] = i
    out_i, out_j, out_k, out_v = [], [], [], []
    for j in range(n):
        bj = index[j]
        for k in range(j, n):
            bk = index[k]
            support = sorted(set(bj) | set(bk))
            ranges = []
            for d in support:
                b, c = bj.get(d, 0), bk.get(d, 0)
                ranges.append(range(abs(b - c), b + c + 1, 2))
            for choice in itertools.product(*ranges):
                key = tuple((d, a) for d, a in zip(support, choice) if a)
                i = lookup.get(key)
                if i is None or i > j:
                    continue
                val = 1.0
                for d, a in zip(support, choice):
                    val *= table[a, bj.get(d, 0), bk.get(d, 0)]
                if val != 0.0:
                    out_i.append(i)
                    out_j.append(j)
                    out_k.append(k)
                    out_v.append(val)
    return (np.asarray(out_i, dtype=np.int64), np.asarray(out_j, dtype=np.int64),
            np.asarray(out_k, dtype=np.int64), np.asarray(out_v, dtype=np.float64))


def galerkin_weighted_product(S, rho, g_m, g_row, g_col, g_val):
    """Stochastic Galerkin product of a scalar field with a vector field.

    Computes ``Y[b, q, :] = sum_e g_val[e] * rho[g_m[e], q] * S[g_col[e], q, :]``
    over the entries ``e`` with ``g_row[e] == b``.

    S has shape ``(P, Q, R)``, rho ``(M + 1, Q)``.
    """
    P, Q, R = S.shape
    Y = np.zeros_like(S)
    flat = S.reshape(P, Q * R)
    order = np.argsort(g_m, kind="stable")
    g_m, g_row, g_col, g_val = g_m[order], g_row[order], g_col[order], g_val[order]
    bounds = np.flatnonzero(np.diff(g_m)) + 1
    starts = np.concatenate(([0], bounds))
    stops = np.concatenate((bounds, [len(g_m)]))
    for a, b in zip(starts, stops):
        if a == b:
            continue
        m = g_m[a]
        G = sp.csr_matrix((g_val[a:b], (g_row[a:b], g_col[a:b])), shape=(P, P))
        prod = (G @ flat).reshape(P, Q, R)
        prod *= rho[m][None, :, None]
        Y += prod
    return Y
