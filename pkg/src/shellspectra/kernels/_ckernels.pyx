# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def triple_product_coo(const cnp.int64_t[::1] ptr, const cnp.int64_t[::1] dims,
                       const cnp.int64_t[::1] exps, const double[:, :, ::1] table):
    """Nonzero ``c_{ijk}`` for ``i <= j <= k``; brute force with pruning."""
    cdef Py_ssize_t n = ptr.shape[0] - 1
    cdef Py_ssize_t i, j, k, pi, pj, pk, ei, ej, ek
    cdef long long di, dj, dk, d, a, b, c
    cdef long long deg_i, deg_j, deg_k
    cdef double val
    cdef Py_ssize_t cap = 1024, count = 0
    cdef long long big = 1 << 60
    cdef cnp.int64_t[::1] degree = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for pi in range(ptr[i], ptr[i + 1]):
            degree[i] += exps[pi]
    out_i = np.empty(cap, dtype=np.int64)
    out_j = np.empty(cap, dtype=np.int64)
    out_k = np.empty(cap, dtype=np.int64)
    out_v = np.empty(cap, dtype=np.float64)
    cdef cnp.int64_t[::1] vi = out_i, vj = out_j, vk = out_k
    cdef double[::1] vv = out_v

    for i in range(n):
        deg_i = degree[i]
        for j in range(i, n):
            deg_j = degree[j]
            for k in range(j, n):
                deg_k = degree[k]
                if (deg_i + deg_j + deg_k) & 1:
                    continue
                if deg_i > deg_j + deg_k or deg_j > deg_i + deg_k or deg_k > deg_i + deg_j:
                    continue
                # merge the three sparse supports
                pi = ptr[i]; ei = ptr[i + 1]
                pj = ptr[j]; ej = ptr[j + 1]
                pk = ptr[k]; ek = ptr[k + 1]
                val = 1.0
                while pi < ei or pj < ej or pk < ek:
                    di = dims[pi] if pi < ei else big
                    dj = dims[pj] if pj < ej else big
                    dk = dims[pk] if pk < ek else big
                    d = di
                    if dj < d:
                        d = dj
                    if dk < d:
                        d = dk
                    a = 0; b = 0; c = 0
                    if di == d:
                        a = exps[pi]; pi += 1
                    if dj == d:
                        b = exps[pj]; pj += 1
                    if dk == d:
                        c = exps[pk]; pk += 1
                    val *= table[a, b, c]
                    if val == 0.0:
                        break
                if val == 0.0:
                    continue
                if count == cap:
                    cap *= 2
                    out_i = np.resize(out_i, cap); out_j = np.resize(out_j, cap)
                    out_k = np.resize(out_k, cap); out_v = np.resize(out_v, cap)
                    vi = out_i; vj = out_j; vk = out_k; vv = out_v
                vi[count] = i; vj[count] = j; vk[count] = k; vv[count] = val
                count += 1
    return out_i[:count].copy(), out_j[:count].copy(), out_k[:count].copy(), out_v[:count].copy()


def galerkin_weighted_product(const double[:, :, ::1] S, const double[:, ::1] rho,
                              const cnp.int64_t[::1] g_m, const cnp.int64_t[::1] g_row,
                              const cnp.int64_t[::1] g_col, const double[::1] g_val):
    """``Y[b, q, :] += g * rho[m, q] * S[a, q, :]`` over the COO entries."""
    cdef Py_ssize_t P = S.shape[0], Q = S.shape[1], R = S.shape[2]
    cdef Py_ssize_t e, q, r, b, a, m
    cdef double g, f
    Y_arr = np.zeros((P, Q, R), dtype=np.float64)
    cdef double[:, :, ::1] Y = Y_arr
    with nogil:
        for e in range(g_val.shape[0]):
            m = g_m[e]; b = g_row[e]; a = g_col[e]; g = g_val[e]
            for q in range(Q):
                f = g * rho[m, q]
                for r in range(R):
                    Y[b, q, r] += f * S[a, q, r]
    return Y_arr
