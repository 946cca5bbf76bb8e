"""Smallest eigenpairs of the generalized symmetric problem ``K y = lambda M y``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, InvalidParameterError

DENSE_LIMIT = 2000


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray


def fix_sign(y, rel=1e-12):
    """Make the first component above ``rel * max|y|`` positive."""
    y = np.asarray(y, dtype=float)
    big = np.abs(y) > rel * np.abs(y).max() if y.size else []
    idx = np.flatnonzero(big)
    if idx.size and y[idx[0]] < 0:
        return -y
    return y


def _dense(A):
    return A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)


def smallest_eigs(K, M, S: int = 1, tol: float = 1e-10, maxiter: int = 500):
    """``S`` smallest eigenpairs, ascending, with ``M``-orthonormal vectors.

    Dense reduction for ``N <= 2000``; otherwise shift-invert Lanczos about 0
    using a sparse factorization of ``K``.
    """
    N = K.shape[0]
    if not 1 <= S <= N:
        raise InvalidParameterError(f"cannot compute {S} eigenpairs of a size-{N} problem")
    if N <= DENSE_LIMIT:
        # largest eigenvalues of M y = mu K y: the Cholesky factor of K keeps the
        # smallest lambda = 1/mu accurate to working precision
        try:
            mu, vecs = sla.eigh(_dense(M), _dense(K), subset_by_index=[N - S, N - 1])
        except np.linalg.LinAlgError as exc:
            raise InvalidParameterError(f"factorization failed, pencil not SPD: {exc}") from exc
        if mu[0] <= 0.0:
            raise InvalidParameterError("mass matrix is not positive definite")
        vals = 1.0 / mu[::-1]
        vecs = vecs[:, ::-1]
        vecs = vecs / np.sqrt(np.einsum("ij,ij->j", vecs, M @ vecs))
    else:
        K = sp.csc_matrix(K)
        M = sp.csc_matrix(M)
        try:
            lu = spla.splu(K)
        except RuntimeError as exc:
            raise InvalidParameterError(f"factorization of K failed: {exc}") from exc
        op = spla.LinearOperator(K.shape, matvec=lu.solve, dtype=float)
        ncv = min(N, max(2 * S + 1, 20))
        try:
            vals, vecs = spla.eigsh(K, k=S, M=M, sigma=0.0, which="LM", OPinv=op,
                                    tol=tol * 1e-2, maxiter=maxiter * N, ncv=ncv)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceError("shift-invert Lanczos did not converge") from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        # re-orthonormalize in the M inner product (clustered values)
        G = vecs.T @ (M @ vecs)
        R = np.linalg.cholesky(0.5 * (G + G.T))
        vecs = np.linalg.solve(R, vecs.T).T
    if vals[0] <= 0.0:
        raise InvalidParameterError("non-positive eigenvalue: K is not positive definite")
    return [EigenPair(float(vals[i]), fix_sign(vecs[:, i])) for i in range(S)]


def gap_ratio(pairs, i: int, j: int) -> float:
    """``lambda^(i) / lambda^(j)`` with 1-based indices ``i < j``."""
    if not 1 <= i < j <= len(pairs):
        raise InvalidParameterError("need 1 <= i < j <= number of pairs")
    return pairs[i - 1].value / pairs[j - 1].value


def residuals(K, M, pairs):
    """Relative residuals ``|K y - lambda M y| / |K y|``."""
    out = []
    for pr in pairs:
        Ky = K @ pr.vector
        out.append(np.linalg.norm(Ky - pr.value * (M @ pr.vector)) / np.linalg.norm(Ky))
    return np.array(out)
