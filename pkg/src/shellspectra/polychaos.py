"""Orthonormal Legendre chaos: polynomials, Gauss rules and moment matrices.

All expectations are taken with respect to the uniform probability measure
on ``[-1, 1]`` (density 1/2), so ``E[L_n^2] = 1`` and Gauss weights sum to 1.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import kernels
from .multiindex import MultiIndex, MultiIndexSet, ZERO


def legendre_table(nmax: int, x) -> np.ndarray:
    """Normalized Legendre values ``L_0..L_nmax`` at ``x``, shape ``(nmax+1, *x.shape)``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = x
    for n in range(1, nmax):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    scale = np.sqrt(2.0 * np.arange(nmax + 1) + 1.0)
    return out * scale.reshape((-1,) + (1,) * x.ndim)


def legendre_value(n: int, x):
    """``L_n(x)`` normalized so that ``E[L_n^2] = 1``."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    val = legendre_table(n, x)[n]
    return float(val) if np.ndim(val) == 0 else val


def _classical_legendre(n, x):
    """Classical P_n(x) and P_n'(x) via the three-term recurrence."""
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)
    p1 = x.copy()
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule normalized for the uniform probability measure."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.nodes) - 1

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


@functools.lru_cache(maxsize=None)
def gauss_nodes(p: int) -> QuadratureRule:
    """``p + 1`` point rule: the zeros of the degree ``p + 1`` Legendre polynomial.

    Nodes come from Newton's method on the recurrence, started from the
    Tricomi asymptotic guess; the odd rules get an exact zero midpoint so
    that grids built from different degrees share that node bit for bit.
    """
    if p < 0:
        raise ValueError("degree must be nonnegative")
    n = p + 1
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5)) * (1 - (n - 1) / (8.0 * n ** 3))
    for _ in range(100):
        val, der = _classical_legendre(n, x)
        step = val / der
        x = x - step
        if np.max(np.abs(step)) < 1e-15:
            break
    val, der = _classical_legendre(n, x)
    weights = 1.0 / ((1.0 - x * x) * der * der)
    x = -x  # ascending
    # enforce exact symmetry
    half = n // 2
    x[n - half:] = -x[:half][::-1]
    weights[n - half:] = weights[:half][::-1]
    if n % 2:
        x[half] = 0.0
    nodes = np.ascontiguousarray(x)
    weights = np.ascontiguousarray(weights)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights)


def lagrange_value(rule: QuadratureRule, k: int, x):
    """Lagrange cardinal polynomial ``l_k`` through the nodes of ``rule``."""
    nodes = rule.nodes
    if not 0 <= k < len(nodes):
        raise IndexError(f"node index {k} out of range for {len(nodes)} nodes")
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    for j, xj in enumerate(nodes):
        if j != k:
            out = out * (x - xj) / (nodes[k] - xj)
    return float(out) if out.ndim == 0 else out


def lagrange_matrix(rule: QuadratureRule, x) -> np.ndarray:
    """All cardinal polynomials at ``x``: shape ``(len(x), p + 1)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return np.stack([lagrange_value(rule, k, x) for k in range(len(rule.nodes))], axis=-1)


@functools.lru_cache(maxsize=None)
def _univariate_triple(a: int, b: int, c: int) -> float:
    if (a + b + c) % 2 or a > b + c or b > a + c or c > a + b:
        return 0.0
    rule = gauss_nodes((a + b + c) // 2 + 1)
    vals = legendre_table(max(a, b, c), rule.nodes)
    return float(np.dot(rule.weights, vals[a] * vals[b] * vals[c]))


def univariate_triple_table(dmax: int) -> np.ndarray:
    """``T[a, b, c] = E[L_a L_b L_c]`` for degrees ``<= dmax``, exact by quadrature."""
    T = np.zeros((dmax + 1,) * 3)
    for a in range(dmax + 1):
        for b in range(dmax + 1):
            for c in range(dmax + 1):
                T[a, b, c] = _univariate_triple(a, b, c)
    return T


def univariate_first_moment(n: int) -> float:
    """``E[x L_n L_{n+1}]``, evaluated by the rule with ``n + 2`` points."""
    rule = gauss_nodes(n + 1)
    vals = legendre_table(n + 1, rule.nodes)
    return float(np.dot(rule.weights, rule.nodes * vals[n] * vals[n + 1]))


def triple_product(alpha: MultiIndex, beta: MultiIndex, gamma: MultiIndex) -> float:
    """``c_{alpha beta gamma} = E[Lambda_alpha Lambda_beta Lambda_gamma]``."""
    val = 1.0
    for d in set(alpha.support) | set(beta.support) | set(gamma.support):
        val *= _univariate_triple(alpha[d], beta[d], gamma[d])
        if val == 0.0:
            return 0.0
    return val


def first_moment(m: int, alpha: MultiIndex, beta: MultiIndex) -> float:
    """``c_{m alpha beta} = E[xi_m Lambda_alpha Lambda_beta]`` for ``m >= 1``."""
    if m < 1:
        raise ValueError("first moments are defined for m >= 1")
    if abs(alpha[m] - beta[m]) != 1:
        return 0.0
    if alpha.shifted(m, -alpha[m]) != beta.shifted(m, -beta[m]):
        return 0.0
    return univariate_first_moment(min(alpha[m], beta[m]))


def evaluate_basis(index_set: MultiIndexSet, xi) -> np.ndarray:
    """``Lambda_alpha(xi)`` for every member; ``xi`` has shape ``(npts, ndim)``.

    Coordinates beyond ``xi.shape[1]`` are taken as zero.
    """
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    npts, ndim = xi.shape
    dmax = max((a.degree for a in index_set), default=0)
    out = np.ones((npts, len(index_set)))
    tables = {}
    for j, alpha in enumerate(index_set):
        for d, e in alpha.items:
            if d not in tables:
                x = xi[:, d - 1] if d <= ndim else np.zeros(npts)
                tables[d] = legendre_table(dmax, x)
            out[:, j] *= tables[d][e]
    return out


def pc_mean_var(coeffs):
    """Mean and variance of ``sum_alpha v_alpha Lambda_alpha``.

    The zero index must come first (the canonical ordering guarantees it).
    Extra trailing axes are treated as independent fields.
    """
    v = np.asarray(coeffs, dtype=float)
    mean = v[0]
    var = np.sum(v * v, axis=0) - v[0] * v[0]
    if np.ndim(mean) == 0:
        return float(mean), float(var)
    return mean, var


class MomentMatrices:
    """Sparse moment matrices ``G^(m)`` and ``G^(alpha)`` over an index set.

    Besides the per-matrix views, the full symmetric triple tensor is kept in
    coordinate form (``tri_*``) because ``Delta(s)``, ``F`` and ``F^v`` are
    all contractions of it.
    """

    def __init__(self, index_set: MultiIndexSet, backend=None):
        self.index_set = index_set
        P = len(index_set)
        self.P = P
        self.M = index_set.max_active_dim
        if P == 0 or index_set[0] != ZERO:
            raise ValueError("index set must contain the zero index (first in canonical order)")

        # first moments: COO over (m, row, col) with G^(0) = I
        g_m = [np.zeros(P, dtype=np.int64)]
        g_r = [np.arange(P, dtype=np.int64)]
        g_c = [np.arange(P, dtype=np.int64)]
        g_v = [np.ones(P)]
        ms, rs, cs, vs = [], [], [], []
        for i, alpha in enumerate(index_set):
            for m in range(1, self.M + 1):
                j = index_set.get_position(alpha.shifted(m, 1))
                if j >= 0:
                    v = univariate_first_moment(alpha[m])
                    ms += [m, m]
                    rs += [i, j]
                    cs += [j, i]
                    vs += [v, v]
        g_m.append(np.asarray(ms, dtype=np.int64))
        g_r.append(np.asarray(rs, dtype=np.int64))
        g_c.append(np.asarray(cs, dtype=np.int64))
        g_v.append(np.asarray(vs, dtype=float))
        self.first_m = np.concatenate(g_m)
        self.first_row = np.concatenate(g_r)
        self.first_col = np.concatenate(g_c)
        self.first_val = np.concatenate(g_v)

        self.G = []
        for m in range(self.M + 1):
            sel = self.first_m == m
            self.G.append(sp.csr_matrix(
                (self.first_val[sel], (self.first_row[sel], self.first_col[sel])), shape=(P, P)))

        # triple products, unique triples i <= j <= k then all permutations
        ptr = [0]
        dims, exps = [], []
        for alpha in index_set:
            for d, e in alpha.items:
                dims.append(d)
                exps.append(e)
            ptr.append(len(dims))
        dmax = max(a.degree for a in index_set)
        table = univariate_triple_table(max(dmax, 0))
        i, j, k, v = kernels.triple_product_coo(
            np.asarray(ptr), np.asarray(dims, dtype=np.int64), np.asarray(exps, dtype=np.int64),
            table, backend=backend)
        order = np.lexsort((k, j, i))
        self.unique_triples = (i[order], j[order], k[order], v[order])
        a, b, c, val = _expand_permutations(*self.unique_triples)
        self.tri_alpha, self.tri_beta, self.tri_gamma, self.tri_val = a, b, c, val
        # (beta, gamma) x alpha operator: Delta(s) = reshape(op @ s)
        self._delta_op = sp.csr_matrix((val, (b * P + c, a)), shape=(P * P, P))
        self._F_op = self._delta_op.T.tocsr()
        self._Galpha = None

    @property
    def Galpha(self) -> dict:
        if self._Galpha is None:
            out = {}
            order = np.argsort(self.tri_alpha, kind="stable")
            a = self.tri_alpha[order]
            bounds = np.searchsorted(a, np.arange(self.P + 1))
            for idx, alpha in enumerate(self.index_set):
                sl = order[bounds[idx]:bounds[idx + 1]]
                out[alpha] = sp.csr_matrix(
                    (self.tri_val[sl], (self.tri_beta[sl], self.tri_gamma[sl])), shape=(self.P, self.P))
            self._Galpha = out
        return self._Galpha

    def delta(self, s) -> np.ndarray:
        """Dense ``Delta(s) = sum_alpha s_alpha G^(alpha)``."""
        return np.asarray(self._delta_op @ np.asarray(s, dtype=float)).reshape(self.P, self.P)

    def contract(self, Q) -> np.ndarray:
        """``r_alpha = sum_{beta,gamma} c_{alpha beta gamma} Q_{beta gamma}``."""
        return self._F_op @ np.asarray(Q, dtype=float).reshape(-1)

    def galerkin_product(self, s, v) -> np.ndarray:
        """Coefficients of the projected product ``s(xi) v(xi)``.

        ``v`` has shape ``(P, ...)``; this is ``Delta(s)`` applied blockwise,
        i.e. the action of ``T(s)``.
        """
        D = self.delta(s)
        v = np.asarray(v, dtype=float)
        return (D @ v.reshape(self.P, -1)).reshape(v.shape)


def _expand_permutations(i, j, k, v):
    perms = [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)]
    a = np.concatenate([p[0] for p in perms])
    b = np.concatenate([p[1] for p in perms])
    c = np.concatenate([p[2] for p in perms])
    val = np.concatenate([v] * 6)
    keys = np.stack([a, b, c], axis=1)
    _, first = np.unique(keys, axis=0, return_index=True)
    first.sort()
    return a[first], b[first], c[first], val[first]


def build_moment_matrices(index_set: MultiIndexSet, backend=None) -> MomentMatrices:
    return MomentMatrices(index_set, backend=backend)
