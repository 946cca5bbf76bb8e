"""Affine stiffness family ``K(xi) = K^0 + sum_m xi_m K^m`` and mass matrix.

Every element shares one reference strain operator (the meshes are
uniform), so the pencil stores that operator once together with per-point
weights ``rho[m, e, q]``.  Any member of the family is assembled from a
weight vector, and the stochastic Galerkin operator is applied matrix-free
through the same factorization.
"""
from __future__ import annotations

import os

import numpy as np
import scipy.io
import scipy.sparse as sp

from .. import kernels
from .strains import COMPONENTS


class AffinePencil:
    """Pencil data for ``K(xi) y = lambda M y``.

    Parameters
    ----------
    strain_op : (nq, R, n_local) array
        Weighted strain operator at reference quadrature points (constitutive
        factor folded in), so the element energy is
        ``sum_q rho_q |strain_op[q] u_e|^2``.
    mass_op : (nq, 5, n_local) array
    elem_dofs : (nel, n_local) int array, ``-1`` marks constrained dofs
    rho : (M + 1, nel, nq) stiffness weights
    mass_rho : (nel, nq) mass weights
    """

    def __init__(self, strain_op, mass_op, elem_dofs, rho, mass_rho, N, space=None,
                 problem=None, free_index=None):
        self.strain_op = np.ascontiguousarray(strain_op)
        self.mass_op = np.ascontiguousarray(mass_op)
        self.elem_dofs = np.asarray(elem_dofs, dtype=np.int64)
        self.rho = np.ascontiguousarray(rho)
        self.mass_rho = np.ascontiguousarray(mass_rho)
        self.N = int(N)
        self.space = space
        self.problem = problem
        self.free_index = free_index
        self.n_terms = self.rho.shape[0] - 1
        nel, nloc = self.elem_dofs.shape
        self.nq = self.strain_op.shape[0]
        self.n_strain = self.strain_op.shape[1]

        # sparse pattern and scatter map shared by every assembled matrix
        rows = np.repeat(self.elem_dofs, nloc, axis=1).ravel()
        cols = np.tile(self.elem_dofs, (1, nloc)).ravel()
        self._valid = (rows >= 0) & (cols >= 0)
        r, c = rows[self._valid], cols[self._valid]
        key = r * self.N + c
        uniq, self._scatter = np.unique(key, return_inverse=True)
        ur, uc = np.divmod(uniq, self.N)
        pattern = sp.csr_matrix((np.arange(1, len(uniq) + 1, dtype=float), (ur, uc)),
                                shape=(self.N, self.N))
        # csr data order may differ from uniq order; map through it
        order = pattern.data.astype(np.int64) - 1
        pos = np.empty_like(order)
        pos[order] = np.arange(len(order))
        self._scatter = pos[self._scatter]
        self._indptr, self._indices = pattern.indptr, pattern.indices

        valid_loc = self.elem_dofs >= 0
        g_rows = (np.arange(nel)[:, None] * nloc + np.arange(nloc)[None, :])[valid_loc]
        self._gather = sp.csr_matrix(
            (np.ones(g_rows.size), (g_rows, self.elem_dofs[valid_loc])), shape=(nel * nloc, self.N))
        self._gather_T = self._gather.T.tocsr()

        self._outer = self._outer_products(self.strain_op)
        self._K_cache = {}
        self._mass = None

    @staticmethod
    def _outer_products(op):
        # (nq, R, n) -> (nq, n*n) with entry [q, k*n + l] = sum_r op[q,r,k] op[q,r,l]
        nq, _, n = op.shape
        return np.einsum("qrk,qrl->qkl", op, op, optimize=True).reshape(nq, n * n)

    def _assemble(self, outer, weights):
        """Assemble ``sum_e sum_q weights[e, q] outer[q]`` into a symmetric CSR matrix."""
        nloc = self.elem_dofs.shape[1]
        data = np.zeros(len(self._indices))
        nel = weights.shape[0]
        chunk = max(1, int(2 ** 24 // (nloc * nloc)))
        offset = 0
        for start in range(0, nel, chunk):
            stop = min(nel, start + chunk)
            Ke = weights[start:stop] @ outer
            sel = self._valid[start * nloc * nloc: stop * nloc * nloc]
            vals = Ke.ravel()[sel]
            idx = self._scatter[offset: offset + vals.size]
            offset += vals.size
            data += np.bincount(idx, weights=vals, minlength=data.size)
        A = sp.csr_matrix((data, self._indices.copy(), self._indptr.copy()), shape=(self.N, self.N))
        return (0.5 * (A + A.T)).tocsr()

    # ----------------------------------------------------------------- family
    def weights(self, xi) -> np.ndarray:
        """``rho_0 + sum_m xi_m rho_m`` with missing ``xi`` entries taken as zero."""
        xi = np.asarray(xi, dtype=float).ravel()[: self.n_terms]
        w = self.rho[0].copy()
        if xi.size:
            w += np.tensordot(xi, self.rho[1: 1 + xi.size], axes=1)
        return w

    def stiffness(self, xi=()) -> sp.csr_matrix:
        """``K(xi)``."""
        return self._assemble(self._outer, self.weights(xi))

    def K(self, m: int) -> sp.csr_matrix:
        """Term matrix ``K^m`` (cached)."""
        if not 0 <= m <= self.n_terms:
            raise IndexError(f"term {m} outside 0..{self.n_terms}")
        if m not in self._K_cache:
            self._K_cache[m] = self._assemble(self._outer, self.rho[m])
        return self._K_cache[m]

    @property
    def mass(self) -> sp.csr_matrix:
        if self._mass is None:
            self._mass = self._assemble(self._outer_products(self.mass_op), self.mass_rho)
        return self._mass

    # ------------------------------------------------------ Galerkin products
    def gather(self, V):
        """Element-local coefficients of ``V`` with shape ``(B, N)`` -> ``(B, nel, n_local)``."""
        V = np.atleast_2d(V)
        nel, nloc = self.elem_dofs.shape
        return (self._gather @ V.T).T.reshape(V.shape[0], nel, nloc)

    def scatter(self, Xe):
        """Adjoint of :meth:`gather`."""
        B = Xe.shape[0]
        return (self._gather_T @ Xe.reshape(B, -1).T).T

    def galerkin_apply(self, V, moments, backend=None):
        """``sum_m (G^(m) kron K^m) v`` for ``V`` of shape ``(P, N)`` (row-major ``(alpha, i)``)."""
        V = np.asarray(V, dtype=float)
        P = V.shape[0]
        nel, nloc = self.elem_dofs.shape
        B = self.strain_op.reshape(self.nq * self.n_strain, nloc)
        S = self.gather(V) @ B.T  # (P, nel, nq*R)
        S = S.reshape(P, nel * self.nq, self.n_strain)
        rho = self.rho.reshape(self.n_terms + 1, -1)
        need = int(moments.first_m.max()) + 1 if moments.first_m.size else 1
        if rho.shape[0] < need:
            rho = np.vstack([rho, np.zeros((need - rho.shape[0], rho.shape[1]))])
        Y = kernels.galerkin_weighted_product(
            S, rho, moments.first_m, moments.first_row, moments.first_col, moments.first_val,
            backend=backend)
        Ye = Y.reshape(P, nel, self.nq * self.n_strain) @ B
        return self.scatter(Ye)

    def energy_matrix(self, V, xi=()):
        """``V K(xi) V^T`` for a small block ``V`` of shape ``(S, N)``, without assembly."""
        V = np.atleast_2d(np.asarray(V, dtype=float))
        nloc = self.elem_dofs.shape[1]
        B = self.strain_op.reshape(self.nq * self.n_strain, nloc)
        S = (self.gather(V) @ B.T).reshape(V.shape[0], -1, self.n_strain)
        A = np.einsum("iqr,q,jqr->ij", S, self.weights(xi).ravel(), S, optimize=True)
        return 0.5 * (A + A.T)

    # ----------------------------------------------------------------- export
    def write_matrix_market(self, directory, terms=None):
        """Write ``K<m>.mtx`` for each term and ``M.mtx``; returns the file list."""
        os.makedirs(directory, exist_ok=True)
        terms = range(self.n_terms + 1) if terms is None else terms
        files = []
        for m in terms:
            path = os.path.join(directory, f"K{m}.mtx")
            scipy.io.mmwrite(path, self.K(m), symmetry="symmetric")
            files.append(path)
        path = os.path.join(directory, "M.mtx")
        scipy.io.mmwrite(path, self.mass, symmetry="symmetric")
        files.append(path)
        return files

    # ------------------------------------------------------------- evaluation
    def dof_map(self):
        """``(component, component-local basis index) -> free index`` (constrained dofs omitted)."""
        npc = self.space.n_per_comp
        out = {}
        for g in np.flatnonzero(self.free_index >= 0):
            c, loc = divmod(int(g), npc)
            out[(COMPONENTS[c], loc)] = int(self.free_index[g])
        return out

    def evaluation_matrix(self, component, x, y=None, deriv=0) -> sp.csr_matrix:
        """Sparse map from a dof vector to ``component`` (or its x/y derivative) at points."""
        c = COMPONENTS.index(component) if isinstance(component, str) else int(component)
        sp_ = self.space
        args = (x,) if sp_.dim == 1 else (x, 0.0 * np.asarray(x) if y is None else y)
        if sp_.dim == 2:
            args = tuple(np.broadcast_arrays(*[np.asarray(a, dtype=float) for a in args]))
        e, ref = sp_.locate(*args)
        tables = sp_.point_tables(e, ref)
        vals = tables[deriv]  # (n_local, npts)
        comp_nodes = sp_.elem_nodes[e]  # (npts, n_local)
        glob = self.free_index[c * sp_.n_per_comp + comp_nodes]
        npts = len(e)
        rows = np.repeat(np.arange(npts), sp_.n_local).reshape(npts, -1)
        keep = glob >= 0
        return sp.csr_matrix((vals.T[keep], (rows[keep], glob[keep])), shape=(npts, self.N))
