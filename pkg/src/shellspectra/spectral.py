"""Stochastic Galerkin spectral inverse and subspace iteration.

Coefficient blocks are stored as arrays of shape ``(P, N)``: row ``alpha``
holds the spatial vector ``v_alpha``, so the flattened array is the
row-major ``(alpha, i)`` layout.  With this layout ``T(s) = Delta(s) kron I``
acts as a left multiplication by ``Delta(s)``.
"""
from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .collocation import reference_basis
from .errors import ConvergenceError, InvalidParameterError
from .polychaos import evaluate_basis


def pc_evaluate(index_set, coeffs, xi):
    """``sum_alpha v_alpha Lambda_alpha(xi)`` for coefficient array ``(P, ...)``."""
    Lam = evaluate_basis(index_set, np.atleast_2d(xi))
    coeffs = np.asarray(coeffs)
    return np.tensordot(Lam, coeffs, axes=(1, 0))


class GalerkinSystem:
    """Kronecker-structured operators of one pencil over one index set."""

    def __init__(self, pencil, moments, inner_tol=1e-10, direct_limit=5000, backend=None,
                 maxiter=1000):
        self.pencil = pencil
        self.moments = moments
        self.P = moments.P
        self.N = pencil.N
        self.inner_tol = inner_tol
        self.backend = backend
        self.maxiter = maxiter
        self.mass = pencil.mass.tocsr()
        self._direct = None
        self._pre = None
        self.inner_iterations = []
        if self.P * self.N <= direct_limit:
            blocks = None
            for m, G in enumerate(moments.G):
                if m > pencil.n_terms:
                    break
                term = sp.kron(G, pencil.K(m), format="csc")
                blocks = term if blocks is None else blocks + term
            self._direct = spla.splu(sp.csc_matrix(blocks))

    def _check(self, V):
        V = np.asarray(V, dtype=float)
        if V.shape != (self.P, self.N):
            raise InvalidParameterError(f"expected coefficient block {(self.P, self.N)}, got {V.shape}")
        return V

    def apply_K(self, V):
        """``K_hat v`` matrix-free."""
        return self.pencil.galerkin_apply(self._check(V), self.moments, backend=self.backend)

    def apply_M(self, V):
        """``M_hat v = (I kron M) v``."""
        return np.asarray((self.mass @ self._check(V).T).T)

    def norm(self, V):
        """Norm in ``R^P kron R^N_M``."""
        V = np.asarray(V)
        return float(np.sqrt(max(np.sum(V * self.apply_M(V)), 0.0)))

    def solve_K(self, R, tol=None):
        """Solve ``K_hat z = r``; PCG with mean-stiffness block preconditioner."""
        R = self._check(R)
        if self._direct is not None:
            return self._direct.solve(R.ravel()).reshape(self.P, self.N)
        tol = self.inner_tol if tol is None else tol
        if self._pre is None:
            self._pre = spla.splu(sp.csc_matrix(self.pencil.K(0)))
        PN = self.P * self.N
        A = spla.LinearOperator((PN, PN), dtype=float,
                                matvec=lambda x: self.apply_K(x.reshape(self.P, self.N)).ravel())
        pre = spla.LinearOperator((PN, PN), dtype=float,
                                  matvec=lambda x: self._pre.solve(x.reshape(self.P, self.N).T).T.ravel())
        x0 = self._pre.solve(R.T).T.ravel()
        count = [0]

        def cb(_):
            count[0] += 1

        z, info = spla.cg(A, R.ravel(), x0=x0, rtol=tol, atol=0.0, M=pre, maxiter=self.maxiter,
                          callback=cb)
        self.inner_iterations.append(count[0])
        if info != 0:
            raise ConvergenceError(f"PCG did not reach {tol:g} in {self.maxiter} iterations")
        return z.reshape(self.P, self.N)

    # ----------------------------------------------------- scalar couplings
    def Fv(self, V, W):
        """``F^v_alpha(v, w) = v . (G^(alpha) kron M) w``."""
        Q = np.asarray(V) @ self.apply_M(W).T
        return self.moments.contract(Q)

    def T_apply(self, s, V):
        return self.moments.delta(s) @ np.asarray(V)


def solve_normalization(moments, Z, mass=None, tol=1e-13, maxiter=50, Q=None):
    """Newton solve of ``F(s, z) = 0``.

    ``Q`` (optional) is the Gram matrix ``z_beta . M z_gamma``; otherwise it is
    formed from ``Z`` and ``mass``.  Returns ``(s, newton_steps, residual)``.
    """
    if Q is None:
        Z = np.asarray(Z, dtype=float)
        MZ = Z if mass is None else np.asarray((mass @ Z.T).T)
        Q = Z @ MZ.T
    Q = 0.5 * (Q + Q.T)
    P = Q.shape[0]
    rhs = moments.contract(Q)
    norm2 = np.trace(Q)
    if not norm2 > 0:
        raise InvalidParameterError("normalization of a zero vector")
    s = np.zeros(P)
    s[0] = np.sqrt(norm2)
    scale = max(abs(norm2), np.abs(rhs).max())
    for it in range(1, maxiter + 1):
        F = moments.contract(np.outer(s, s)) - rhs
        J = 2.0 * moments.delta(s)
        try:
            step = sla.solve(J, F, assume_a="sym")
        except (sla.LinAlgError, ValueError) as exc:
            raise ConvergenceError(f"singular Newton Jacobian: {exc}") from exc
        s = s - step
        if np.linalg.norm(step) <= tol * np.linalg.norm(s):
            res = np.abs(moments.contract(np.outer(s, s)) - rhs).max() / scale
            return s, it, res
    res = np.abs(moments.contract(np.outer(s, s)) - rhs).max() / scale
    if res < 1e-12:
        return s, maxiter, res
    raise ConvergenceError(f"Newton for the normalization did not converge (residual {res:.2e})")


@dataclass
class IterationReport:
    deltas: list = field(default_factory=list)
    eigen_increments: list = field(default_factory=list)
    converged: bool = False
    steps: int = 0
    normalization_residual: float = float("nan")
    newton_steps: list = field(default_factory=list)
    inner_iterations: list = field(default_factory=list)

    def ratios(self):
        d = np.asarray(self.deltas)
        return d[1:] / d[:-1]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["step", "delta", "eigen_increment"])
            for k, d in enumerate(self.deltas, start=1):
                e = self.eigen_increments[k - 1] if k - 1 < len(self.eigen_increments) else float("nan")
                wr.writerow([k, f"{d:.17e}", f"{e:.17e}"])


@dataclass
class SpectralEigenpair:
    index_set: object
    eigenvalue: np.ndarray  # (P,)
    vector: np.ndarray      # (P, N)
    report: IterationReport

    def mean_var(self):
        lam = self.eigenvalue
        return float(lam[0]), float(np.sum(lam[1:] ** 2))

    def evaluate(self, xi):
        return pc_evaluate(self.index_set, self.eigenvalue, xi), pc_evaluate(self.index_set, self.vector, xi)


def initial_block(P, vectors):
    """Deterministic vectors placed in the ``alpha = 0`` block: ``(S, P, N)``."""
    vectors = np.atleast_2d(vectors)
    out = np.zeros((vectors.shape[0], P, vectors.shape[1]))
    out[:, 0, :] = vectors
    return out


def inverse_iteration(system: GalerkinSystem, y0=None, tol=1e-8, maxiter=100):
    """Spectral inverse iteration for the smallest eigenpair."""

    P = system.P
    Y = initial_block(P, reference_basis(system.pencil, 1))[0] if y0 is None else np.array(y0, float)
    e1 = np.zeros(P)
    e1[0] = 1.0
    report = IterationReport()
    lam_prev = None
    for k in range(1, maxiter + 1):
        Z = system.solve_K(system.apply_M(Y))
        MZ = system.apply_M(Z)
        s, nsteps, res = solve_normalization(system.moments, Z, Q=Z @ MZ.T)
        D = system.moments.delta(s)
        try:
            lu = sla.lu_factor(D)
        except sla.LinAlgError as exc:
            raise ConvergenceError("Delta(s) is singular") from exc
        Y_new = sla.lu_solve(lu, Z)
        lam = sla.lu_solve(lu, e1)
        delta = system.norm(Y_new - Y)
        report.deltas.append(delta)
        report.newton_steps.append(nsteps)
        report.normalization_residual = res
        if lam_prev is not None:
            report.eigen_increments.append(float(np.linalg.norm(lam - lam_prev)))
        else:
            report.eigen_increments.append(float("nan"))
        lam_prev = lam
        Y = Y_new
        report.steps = k
        if delta < tol:
            report.converged = True
            break
    report.inner_iterations = list(system.inner_iterations)
    if not report.converged:
        raise ConvergenceError(f"inverse iteration did not converge in {maxiter} steps", report=report)
    return SpectralEigenpair(system.moments.index_set, lam, Y, report)


def project_spectral(system: GalerkinSystem, reference, B):
    """``p_i = sum_j T(r_ij) b_j`` with ``r_ij,alpha = <ybar_i, b_j,alpha>_M``."""
    MR = np.asarray((system.mass @ reference.T).T)  # (S, N)
    S = B.shape[0]
    out = np.zeros_like(B)
    for i in range(S):
        for j in range(S):
            r = B[j] @ MR[i]  # (P,)
            out[i] += system.moments.delta(r) @ B[j]
    return out


@dataclass
class SpectralSubspace:
    index_set: object
    basis: np.ndarray  # (S, P, N) projected basis
    report: IterationReport
    reference: np.ndarray

    def evaluate(self, xi):
        """Basis vectors at ``xi``: ``(n, S, N)``."""
        return pc_evaluate(self.index_set, np.moveaxis(self.basis, 0, 1), xi)

    def statistics(self):
        """PC mean and variance of each basis vector: two ``(S, N)`` arrays."""
        return self.basis[:, 0, :], np.sum(self.basis[:, 1:, :] ** 2, axis=1)


def _align(Y, MR):
    # The smoothing substitution turns an exactly degenerate cluster by a fixed
    # angle each sweep. Undo that with the orthogonal factor that best matches
    # the mean blocks to the reference; the projected basis is unchanged by it.
    if Y.shape[0] < 2:
        return Y
    C = MR @ Y[:, 0, :].T
    U, _, Vt = np.linalg.svd(C)
    R = Vt.T @ U.T
    return np.einsum("cpn,cb->bpn", Y, R)


def subspace_iteration(system: GalerkinSystem, S: int, reference=None, y0=None, tol=1e-8,
                       maxiter=100):
    """Spectral subspace iteration with projected-increment stopping."""

    if S < 1:
        raise InvalidParameterError("subspace dimension must be >= 1")
    P = system.P
    ref = reference_basis(system.pencil, S) if reference is None else np.asarray(reference, float)
    Y = initial_block(P, ref) if y0 is None else np.array(y0, dtype=float)
    report = IterationReport()
    MR = (system.pencil.mass @ ref.T).T
    p_prev = project_spectral(system, ref, Y)
    for k in range(1, maxiter + 1):
        Z = np.array([system.solve_K(system.apply_M(Y[i])) for i in range(S)])
        # smoothing substitution, once per sweep before deflation
        Z[0] = Z.sum(axis=0)
        Y_new = np.empty_like(Y)
        for i in range(S):
            W = Z[i].copy()
            for j in range(i):
                W -= system.T_apply(system.Fv(Z[i], Y_new[j]), Y_new[j])
            MW = system.apply_M(W)
            s, nsteps, res = solve_normalization(system.moments, W, Q=W @ MW.T)
            D = system.moments.delta(s)
            try:
                Y_new[i] = sla.solve(D, W)
            except sla.LinAlgError as exc:
                raise ConvergenceError("T(s) is singular") from exc
            report.newton_steps.append(nsteps)
            report.normalization_residual = res
        Y = _align(Y_new, MR)
        p = project_spectral(system, ref, Y)
        delta = float(np.sqrt(sum(system.norm(p[i] - p_prev[i]) ** 2 for i in range(S))))
        p_prev = p
        report.deltas.append(delta)
        report.steps = k
        if delta < tol:
            report.converged = True
            break
    report.inner_iterations = list(system.inner_iterations)
    if not report.converged:
        raise ConvergenceError(f"subspace iteration did not converge in {maxiter} steps", report=report)
    return SpectralSubspace(system.moments.index_set, p_prev, report, ref), Y


def ritz_values(pencil, vectors, xi):
    """Eigenvalues of the pencil restricted to ``span(vectors)`` at ``xi``."""
    B = np.atleast_2d(vectors)
    K = pencil.stiffness(xi)
    A = B @ (K @ B.T)
    Mb = B @ (pencil.mass @ B.T)
    return sla.eigh(0.5 * (A + A.T), 0.5 * (Mb + Mb.T), eigvals_only=True)


def ritz_statistics(pencil, subspace: SpectralSubspace, grid):
    """Mean and variance of the Ritz values of ``span(basis(xi))`` by sparse quadrature.

    Returns ``(mean, var, values)`` with ``values`` of shape ``(npts, S)``.
    """
    from .collocation import statistics

    vals = np.empty((grid.size, subspace.basis.shape[0]))
    for pid, pt in enumerate(grid.points):
        V = subspace.evaluate(pt)[0]
        A = pencil.energy_matrix(V, pt)
        Mb = V @ (pencil.mass @ V.T)
        vals[pid] = sla.eigh(A, 0.5 * (Mb + Mb.T), eigvals_only=True)
    mean, var = statistics(grid, vals)
    return mean, var, vals


def index_set_hash(index_set) -> str:
    h = hashlib.sha1()
    for alpha in index_set:
        h.update(alpha.to_text().encode())
        h.update(b"\n")
    return h.hexdigest()[:16]


def write_coefficients(path, index_set, coeffs):
    """Text dump: header ``P N hash`` then one row per ``alpha``."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
    P, N = coeffs.shape
    with open(path, "w") as fh:
        fh.write(f"# P={P} N={N} A={index_set_hash(index_set)}\n")
        for row in coeffs:
            fh.write(" ".join(f"{v:.17e}" for v in row) + "\n")


def read_coefficients(path):
    with open(path) as fh:
        header = fh.readline().strip().lstrip("#").split()
        meta = dict(item.split("=") for item in header)
        data = np.loadtxt(fh, ndmin=2)
    return meta, data.reshape(int(meta["P"]), int(meta["N"]))
