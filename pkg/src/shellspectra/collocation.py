"""Anisotropic sparse-grid collocation on Gauss-Legendre nodes.

The operator is kept in combination form ``sum_gamma c_gamma (x)_m I_{gamma_m}``,
where ``c_gamma`` collects the signs ``(-1)^|alpha - gamma|`` over all
``alpha in A`` with ``alpha - 1 <= gamma <= alpha``.  Grid points are
identified structurally: a point is the set of ``(dim, degree, node)``
triples of its nonzero coordinates, so no floating point comparison is
ever needed to merge tensor grids.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field

import numpy as np

from .eigsolve import fix_sign, smallest_eigs
from .errors import FlaggedPointError, InvalidParameterError
from .multiindex import MultiIndex, MultiIndexSet
from .polychaos import gauss_nodes, lagrange_matrix, legendre_table


def combination_terms(index_set: MultiIndexSet):
    """Nonzero ``(gamma, c_gamma)`` pairs of the combination formula."""
    coef = {}
    for alpha in index_set:
        supp = alpha.support
        for drop in itertools.product((0, 1), repeat=len(supp)):
            entries = {d: alpha[d] - s for d, s in zip(supp, drop) if alpha[d] - s > 0}
            gamma = MultiIndex(entries)
            coef[gamma] = coef.get(gamma, 0) + (-1) ** sum(drop)
    terms = [(g, c) for g, c in coef.items() if c != 0]
    terms.sort(key=lambda gc: gc[0].sort_key())
    return terms


def _node_key(dim, degree, k):
    # the odd rules share an exact zero midpoint, which every rule of degree 0 also has
    if degree % 2 == 0 and k == degree // 2:
        return None
    return (dim, degree, k)


@dataclass
class TensorTerm:
    gamma: MultiIndex
    coefficient: int
    dims: tuple
    shape: tuple
    point_ids: np.ndarray  # flattened tensor order (C order over dims)


@dataclass
class SparseGrid:
    index_set: MultiIndexSet
    points: np.ndarray  # (npts, M_A)
    keys: list
    terms: list = field(default_factory=list)
    weights: np.ndarray = None

    @property
    def size(self) -> int:
        return len(self.keys)

    @property
    def ndim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.size


def _tensor_keys(gamma: MultiIndex):
    dims = gamma.support
    shape = tuple(gamma[d] + 1 for d in dims)
    for ks in itertools.product(*[range(n) for n in shape]):
        yield ks, tuple(kk for kk in (_node_key(d, gamma[d], k) for d, k in zip(dims, ks))
                        if kk is not None)


def grid_keys(index_set: MultiIndexSet, general: bool = False) -> set:
    """Structural point keys of the grid.

    ``general=False`` uses the union of the tensor grids of ``alpha in A``;
    ``general=True`` walks every ``gamma`` in ``alpha - 1 <= gamma <= alpha``.
    """
    out = set()
    for alpha in index_set:
        if general:
            supp = alpha.support
            gammas = [MultiIndex({d: alpha[d] - s for d, s in zip(supp, drop) if alpha[d] - s > 0})
                      for drop in itertools.product((0, 1), repeat=len(supp))]
        else:
            gammas = [alpha]
        for g in gammas:
            out.update(key for _, key in _tensor_keys(g))
    return out


def _key_coords(key, M):
    x = np.zeros(M)
    for d, deg, k in key:
        x[d - 1] = gauss_nodes(deg).nodes[k]
    return x


def build_grid(index_set: MultiIndexSet) -> SparseGrid:
    """Collocation grid and quadrature weights for a monotone index set."""
    M = index_set.max_active_dim
    keys = []
    key_to_id = {}
    for alpha in index_set:
        for _, key in _tensor_keys(alpha):
            if key not in key_to_id:
                key_to_id[key] = len(keys)
                keys.append(key)
    weights = np.zeros(len(keys))
    terms = []
    for gamma, c in combination_terms(index_set):
        dims = gamma.support
        rules = [gauss_nodes(gamma[d]) for d in dims]
        shape = tuple(len(r.nodes) for r in rules)
        ids = np.empty(int(np.prod(shape, dtype=np.int64)), dtype=np.int64)
        for flat, (ks, key) in enumerate(_tensor_keys(gamma)):
            pid = key_to_id[key]
            ids[flat] = pid
            w = 1.0
            for r, k in zip(rules, ks):
                w *= r.weights[k]
            weights[pid] += c * w
        terms.append(TensorTerm(gamma, c, dims, shape, ids))
    points = np.array([_key_coords(k, M) for k in keys]).reshape(len(keys), M)
    return SparseGrid(index_set, points, keys, terms, weights)


def interpolate(grid: SparseGrid, values, xi) -> np.ndarray:
    """Evaluate ``I_A`` of pointwise data at parameter points ``xi``.

    ``values`` has shape ``(npts, ...)``; ``xi`` has shape ``(n, d)`` (missing
    trailing coordinates are zero).  Returns ``(n, ...)``.
    """
    values = np.asarray(values, dtype=float)
    if values.shape[0] != grid.size:
        raise InvalidParameterError(
            f"need data at all {grid.size} grid points, got {values.shape[0]}")
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    n = xi.shape[0]
    tail = values.shape[1:]
    flat = values.reshape(grid.size, -1)
    out = np.zeros((n, flat.shape[1]))
    for term in grid.terms:
        T = flat[term.point_ids].reshape(term.shape + (flat.shape[1],))
        if not term.dims:
            out += term.coefficient * T[None, :]
            continue
        # contract dimension by dimension, keeping the evaluation index first
        first = True
        for d, n_nodes in zip(term.dims, term.shape):
            x = xi[:, d - 1] if d - 1 < xi.shape[1] else np.zeros(n)
            L = lagrange_matrix(gauss_nodes(n_nodes - 1), x)
            if first:
                T = np.tensordot(L, T, axes=(1, 0))
                first = False
            else:
                T = np.einsum("nk,nk...->n...", L, T)
        out += term.coefficient * T
    return out.reshape((n,) + tail)


def chaos_coefficients(grid: SparseGrid, values):
    """Legendre chaos coefficients of ``I_A`` applied to pointwise data.

    Each tensor interpolant has degree ``gamma_m`` in direction ``m``, so its
    coefficients are exact under the tensor Gauss rule it was built on.
    Returns ``(indices, coeffs)``: a list of multi-indices and an array of
    shape ``(len(indices), ...)``.
    """
    values = np.asarray(values, dtype=float)
    tail = values.shape[1:]
    flat = values.reshape(grid.size, -1)
    acc = {}
    for term in grid.terms:
        T = flat[term.point_ids].reshape(term.shape + (flat.shape[1],))
        for d in term.dims:
            r = gauss_nodes(term.gamma[d])
            V = legendre_table(len(r.nodes) - 1, r.nodes) * r.weights  # (degree, node)
            T = np.moveaxis(np.tensordot(V, T, axes=([1], [0])), 0, -2)
        # axes are now (beta_1, ..., beta_k, F) in the order of term.dims
        for beta in itertools.product(*(range(n) for n in term.shape)):
            key = tuple((d, b) for d, b in zip(term.dims, beta) if b)
            c = term.coefficient * T[beta]
            if key in acc:
                acc[key] += c
            else:
                acc[key] = c.copy()
    keys = sorted(acc, key=lambda k: (sum(b for _, b in k), k))
    indices = [MultiIndex(k) for k in keys]
    coeffs = np.array([acc[k] for k in keys]).reshape((len(keys),) + tail)
    return indices, coeffs


def statistics(grid: SparseGrid, values):
    """Mean and variance of the sparse interpolant of pointwise data.

    The mean is the sparse quadrature of the data. The variance is the sum of
    the squared nonconstant chaos coefficients of the interpolant, which is
    exact for it and never negative.
    """
    values = np.asarray(values, dtype=float)
    w = grid.weights.reshape((-1,) + (1,) * (values.ndim - 1))
    mean = np.sum(w * values, axis=0)
    indices, coeffs = chaos_coefficients(grid, values)
    var = sum((c * c for a, c in zip(indices, coeffs) if a.degree), np.zeros_like(mean))
    return mean, var


def quadrature_statistics(grid: SparseGrid, values):
    """Mean and second-moment-minus-squared-mean variance by the sparse quadrature."""
    values = np.asarray(values, dtype=float)
    w = grid.weights.reshape((-1,) + (1,) * (values.ndim - 1))
    mean = np.sum(w * values, axis=0)
    second = np.sum(w * values * values, axis=0)
    return mean, second - mean * mean


# ---------------------------------------------------------------- eigenpairs
class EnsembleCache:
    """Per-point eigen solutions keyed by the structural point key."""

    def __init__(self, pencil, S: int):
        self.pencil = pencil
        self.S = S
        self._store = {}

    def solve(self, key, xi):
        hit = self._store.get(key)
        if hit is None or len(hit) < self.S:
            K = self.pencil.stiffness(xi)
            hit = smallest_eigs(K, self.pencil.mass, self.S)
            self._store[key] = hit
        return hit[: self.S]

    def __len__(self):
        return len(self._store)


def _ensemble(pencil, grid, S, cache):
    cache = EnsembleCache(pencil, S) if cache is None else cache
    if cache.S < S:
        raise InvalidParameterError("cache holds fewer eigenpairs than requested")
    lam = np.empty((grid.size, S))
    vec = np.empty((grid.size, S, pencil.N))
    for pid, key in enumerate(grid.keys):
        pairs = cache.solve(key, grid.points[pid])
        for i in range(S):
            lam[pid, i] = pairs[i].value
            vec[pid, i] = pairs[i].vector
    return lam, vec, cache


@dataclass
class CollocationResult:
    """Pointwise data on a grid plus interpolation and quadrature helpers."""

    grid: SparseGrid
    values: np.ndarray   # (npts, S)
    vectors: np.ndarray  # (npts, S, N) projected / aligned vectors
    reference: np.ndarray

    def evaluate(self, xi):
        return interpolate(self.grid, self.values, xi), interpolate(self.grid, self.vectors, xi)

    def value_statistics(self):
        return statistics(self.grid, self.values)

    def vector_statistics(self):
        return statistics(self.grid, self.vectors)

    def write_ensemble(self, path, with_vectors=False):
        write_ensemble_csv(path, self.grid, self.values, self.vectors if with_vectors else None)


def canonical_basis(pencil, vectors, values, cluster_tol=1e-6):
    """Rotate each cluster of (numerically) equal eigenvalues into a fixed basis.

    Inside a cluster the eigenvectors are only defined up to rotation.  The
    rotation is fixed by diagonalizing the Gram matrix of the transverse
    displacement sampled along the line ``y = 0`` (largest first), followed
    by the usual sign convention.
    """
    Y = np.array(vectors, dtype=float)
    values = np.asarray(values, dtype=float)
    S = len(values)
    start = 0
    probe = None
    while start < S:
        stop = start + 1
        while stop < S and values[stop] - values[start] <= cluster_tol * abs(values[start]):
            stop += 1
        if stop - start > 1:
            if probe is None:
                sp_ = pencil.space
                xs = np.linspace(sp_.x0, sp_.x1, 97)[1:-1]
                probe = pencil.evaluation_matrix("w", xs, np.zeros_like(xs))
            block = Y[start:stop]
            A = probe @ block.T
            _, R = np.linalg.eigh(A.T @ A)
            Y[start:stop] = R[:, ::-1].T @ block
        start = stop
    return np.array([fix_sign(y) for y in Y])


def reference_basis(pencil, S):
    """Eigenvectors at ``xi = 0``, shape ``(S, N)``, clusters canonically rotated."""
    pairs = smallest_eigs(pencil.stiffness(), pencil.mass, S)
    return canonical_basis(pencil, [pr.vector for pr in pairs], [pr.value for pr in pairs])


def collocate_simple(pencil, grid: SparseGrid, reference=None, cache=None) -> CollocationResult:
    """Simple-eigenpair collocation with sign alignment against ``reference``."""
    ref = reference_basis(pencil, 1)[0] if reference is None else np.asarray(reference, float).ravel()
    lam, vec, _ = _ensemble(pencil, grid, 1, cache)
    Mref = pencil.mass @ ref
    ip = vec[:, 0, :] @ Mref
    bad = np.flatnonzero(ip == 0.0)
    if bad.size:
        raise FlaggedPointError("eigenvector orthogonal to the reference; sign undefined",
                                grid.points[bad])
    vec[:, 0, :] *= np.sign(ip)[:, None]
    return CollocationResult(grid, lam, vec, ref[None, :])


def project_onto_reference(raw, reference, mass, cond_limit=1e12):
    """``p_i = sum_j <ybar_i, b_j>_M b_j`` for raw basis ``(S, N)``; returns ``(p, Pi)``."""
    Pi = (reference @ mass) @ raw.T
    sv = np.linalg.svd(Pi, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > cond_limit:
        return None, Pi
    return Pi @ raw, Pi


def collocate_subspace(pencil, grid: SparseGrid, S: int, reference=None, cache=None,
                       rotations=None) -> CollocationResult:
    """Subspace collocation: per-point eigenvectors projected onto a reference basis.

    ``rotations`` (optional, ``(npts, S, S)``) recombines the raw eigenvectors
    before projection; the output does not depend on it.
    """
    ref = reference_basis(pencil, S) if reference is None else np.asarray(reference, float)
    lam, vec, _ = _ensemble(pencil, grid, S, cache)
    flagged = []
    out = np.empty_like(vec)
    for pid in range(grid.size):
        raw = vec[pid] if rotations is None else rotations[pid] @ vec[pid]
        proj, _ = project_onto_reference(raw, ref, pencil.mass)
        if proj is None:
            flagged.append(pid)
        else:
            out[pid] = proj
    if flagged:
        raise FlaggedPointError("projection matrix is singular", grid.points[flagged])
    return CollocationResult(grid, lam, out, ref)


def write_ensemble_csv(path, grid: SparseGrid, values, vectors=None):
    values = np.asarray(values)
    S = values.shape[1]
    header = [f"xi{m + 1}" for m in range(grid.ndim)] + ["weight"] + [f"lambda{i + 1}" for i in range(S)]
    if vectors is not None:
        N = vectors.shape[2]
        header += [f"p{i + 1}_{j}" for i in range(S) for j in range(N)]
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        for pid in range(grid.size):
            row = list(grid.points[pid]) + [grid.weights[pid]] + list(values[pid])
            if vectors is not None:
                row += list(vectors[pid].ravel())
            wr.writerow([f"{v:.17e}" for v in row])
