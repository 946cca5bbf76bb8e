import numpy as np
import pytest
import scipy.sparse as sp

from shellspectra import collocation as coll
from shellspectra.eigsolve import smallest_eigs
from shellspectra.multiindex import MultiIndex, MultiIndexSet, generate_set
from shellspectra.polychaos import build_moment_matrices, evaluate_basis, gauss_nodes
from shellspectra.randomfield import FieldExpansion
from shellspectra.shellfem import OneD, ShellProblem, TwoD, assemble
from shellspectra.spectral import (GalerkinSystem, SpectralSubspace, initial_block,
                                   inverse_iteration, pc_evaluate, read_coefficients,
                                   ritz_statistics, ritz_values, solve_normalization,
                                   subspace_iteration, write_coefficients)

E1 = MultiIndex.unit(1)


def pencil_1d(M=3, p=3, k=6, t=0.01):
    return assemble(ShellProblem(mode=OneD(k=k), p=p, t=t, field=FieldExpansion("axial", M)))


@pytest.fixture(scope="module")
def pen():
    return pencil_1d()


def dense_khat(pen, mm):
    return sum(sp.kron(G, pen.K(m)) for m, G in enumerate(mm.G) if m <= pen.n_terms).toarray()


def test_galerkin_apply_matches_kronecker(pen):
    mm = build_moment_matrices(generate_set(None, 0.02))
    V = np.random.default_rng(0).normal(size=(mm.P, pen.N))
    ref = (dense_khat(pen, mm) @ V.ravel()).reshape(mm.P, pen.N)
    for backend in (None, "python"):
        assert np.allclose(pen.galerkin_apply(V, mm, backend=backend), ref, rtol=1e-12, atol=1e-10)


def test_galerkin_apply_deterministic_and_sparsity(pen):
    mm0 = build_moment_matrices(MultiIndexSet([MultiIndex()]))
    v = np.random.default_rng(1).normal(size=(1, pen.N))
    assert np.allclose(pen.galerkin_apply(v, mm0), (pen.K(0) @ v[0])[None])
    A = generate_set(None, 0.02)
    mm = build_moment_matrices(A)
    V = np.zeros((mm.P, pen.N))
    V[0] = v[0]
    out = pen.galerkin_apply(V, mm)
    allowed = {0} | {A.position(MultiIndex.unit(m)) for m in range(1, min(A.max_active_dim, 3) + 1)}
    for b in range(mm.P):
        if b not in allowed:
            assert np.allclose(out[b], 0.0)


def test_scalar_kronecker_oracle():
    # a 1x1 "pencil" reduces K_hat to sum_m G^(m) k_m on A = {0, e1}
    A = MultiIndexSet([MultiIndex(), E1])
    mm = build_moment_matrices(A)
    k0, k1 = 2.0, 0.5
    ref = k0 * np.eye(2) + k1 * mm.G[1].toarray()
    v = np.array([0.3, -1.2])
    assert np.allclose(ref @ v, [k0 * 0.3 + k1 * (-1.2) / np.sqrt(3), k0 * -1.2 + k1 * 0.3 / np.sqrt(3)])


def test_solve_K_direct_and_iterative_agree(pen):
    mm = build_moment_matrices(generate_set(None, 0.02))
    R = np.random.default_rng(2).normal(size=(mm.P, pen.N))
    direct = GalerkinSystem(pen, mm)
    pcg = GalerkinSystem(pen, mm, direct_limit=0, inner_tol=1e-12)
    zd, zi = direct.solve_K(R), pcg.solve_K(R)
    assert np.linalg.norm(zd - zi) <= 1e-9 * np.linalg.norm(zd)
    res = direct.apply_K(zd) - R
    assert np.linalg.norm(res) <= 1e-10 * np.linalg.norm(R)
    assert pcg.inner_iterations and pcg.inner_iterations[0] > 0


def test_solve_K_deterministic_limit():
    pen0 = pencil_1d(M=0)
    mm = build_moment_matrices(generate_set(None, 0.1))
    R = np.random.default_rng(3).normal(size=(mm.P, pen0.N))
    z = GalerkinSystem(pen0, mm).solve_K(R)
    from scipy.sparse.linalg import spsolve
    for a in range(mm.P):
        assert np.allclose(z[a], spsolve(pen0.K(0).tocsc(), R[a]), rtol=1e-10, atol=1e-12)


def test_normalization_examples(pen):
    mm = build_moment_matrices(generate_set(None, 0.05))
    z = np.zeros((mm.P, pen.N))
    z[0] = np.random.default_rng(4).normal(size=pen.N)
    s, _, _ = solve_normalization(mm, z, pen.mass)
    assert s[0] == pytest.approx(np.sqrt(z[0] @ (pen.mass @ z[0])))
    assert np.allclose(s[1:], 0.0, atol=1e-12)
    s2, _, _ = solve_normalization(mm, -3.0 * z, pen.mass)
    assert np.allclose(s2, 3.0 * s)


def test_normalization_sqrt_oracle():
    # ||z(xi)||^2 = 1 + xi_1 with z(xi) = (1, sqrt(1/3) ... ) built from Q directly
    A = MultiIndexSet([MultiIndex(), E1, MultiIndex.unit(1, 2)])
    mm = build_moment_matrices(A)
    # Gram matrix Q with sum_bg Q_bg Lambda_b Lambda_g = 1 + xi_1
    Q = np.zeros((3, 3))
    Q[0, 0] = 1.0
    Q[0, 1] = Q[1, 0] = 0.5 / np.sqrt(3)
    s, _, res = solve_normalization(mm, None, Q=Q)
    assert res <= 1e-12
    assert np.allclose(mm.contract(np.outer(s, s)), mm.contract(Q), atol=1e-12)
    # the projected sqrt(1 + x) is close to the Galerkin-normalized s
    r = gauss_nodes(30)
    L = evaluate_basis(A, r.nodes[:, None])
    proj = L.T @ (r.weights * np.sqrt(1 + r.nodes))
    assert np.allclose(s, proj, atol=0.05)


def test_inverse_iteration_zero_variance():
    pen0 = pencil_1d(M=0)
    mm = build_moment_matrices(generate_set(None, 0.05))
    sol = inverse_iteration(GalerkinSystem(pen0, mm))
    det = smallest_eigs(pen0.stiffness(), pen0.mass)[0]
    assert sol.eigenvalue[0] == pytest.approx(det.value, rel=1e-10)
    assert np.allclose(sol.eigenvalue[1:], 0.0, atol=1e-12)
    assert np.allclose(sol.vector[0], det.vector, atol=1e-8)


@pytest.fixture(scope="module")
def converged(pen):
    out = {}
    for eps in (0.1, 0.02, 5e-3):
        A = generate_set(None, eps)
        out[eps] = inverse_iteration(GalerkinSystem(pen, build_moment_matrices(A)), tol=1e-10)
    return out


def pointwise_residuals(pen, sol, xi):
    lam, Y = sol.evaluate(xi)
    out = []
    for i, x in enumerate(xi):
        K = pen.stiffness(x)
        r = K @ Y[i] - lam[i] * (pen.mass @ Y[i])
        out.append(np.linalg.norm(r) / np.linalg.norm(K @ Y[i]))
    return np.array(out)


def test_pointwise_residual_decreases(pen, converged):
    xi = np.random.default_rng(5).uniform(-1, 1, (20, pen.n_terms))
    errs = [pointwise_residuals(pen, converged[e], xi).max() for e in (0.1, 0.02, 5e-3)]
    assert errs[0] > errs[1] > errs[2]


def test_fixed_point_normalization_and_increments(pen, converged):
    sol = converged[5e-3]
    assert sol.report.normalization_residual <= 1e-10
    d = np.array(sol.report.deltas)
    e = np.array(sol.report.eigen_increments[1:])
    assert np.all(e[-5:] <= 10.0 * d[1:][-5:])


def test_inner_tolerance_insensitive(pen):
    mm = build_moment_matrices(generate_set(None, 0.02))
    a = inverse_iteration(GalerkinSystem(pen, mm, direct_limit=0, inner_tol=1e-10), tol=1e-9)
    b = inverse_iteration(GalerkinSystem(pen, mm, direct_limit=0, inner_tol=5e-11), tol=1e-9)
    assert np.allclose(a.eigenvalue, b.eigenvalue, rtol=1e-8, atol=1e-12)


def test_agrees_with_collocation(pen, converged):
    A = generate_set(None, 5e-3)
    col = coll.collocate_simple(pen, coll.build_grid(A))
    gm, gv = converged[5e-3].mean_var()
    cm, cv = col.value_statistics()
    assert gm == pytest.approx(cm[0], rel=1e-6)
    assert gv == pytest.approx(cv[0], rel=1e-2)


@pytest.fixture(scope="module")
def pen2d():
    # coarsest mesh whose lowest eigenvalue is a clean double pair
    return assemble(ShellProblem(mode=TwoD(2, 8), p=5, field=FieldExpansion("axial", 3)))


def test_subspace_zero_variance():
    pen0 = assemble(ShellProblem(mode=TwoD(4, 8), p=3))
    mm = build_moment_matrices(generate_set(None, 0.1))
    sub, _ = subspace_iteration(GalerkinSystem(pen0, mm), 2, tol=1e-10)
    ref = coll.reference_basis(pen0, 2)
    assert np.allclose(sub.basis[:, 0, :], ref, atol=1e-8)
    assert np.allclose(sub.basis[:, 1:, :], 0.0, atol=1e-10)
    assert sub.report.deltas[0] < 1e-12


def test_subspace_initial_block_invariance(pen2d):
    mm = build_moment_matrices(generate_set(None, 0.05))
    system = GalerkinSystem(pen2d, mm)
    ref = coll.reference_basis(pen2d, 2)
    a, _ = subspace_iteration(system, 2, ref, tol=1e-10)
    R = np.array([[0.6, 0.8], [-0.8, 0.6]])
    b, _ = subspace_iteration(system, 2, ref, y0=initial_block(mm.P, R @ ref), tol=1e-10)
    diff = np.sqrt(sum(system.norm(a.basis[i] - b.basis[i]) ** 2 for i in range(2)))
    assert diff <= 1e-7


def test_subspace_against_collocation_and_ritz(pen2d):
    A = generate_set(None, 0.05)
    mm = build_moment_matrices(A)
    ref = coll.reference_basis(pen2d, 2)
    sub, _ = subspace_iteration(GalerkinSystem(pen2d, mm), 2, ref, tol=1e-10)
    grid = coll.build_grid(A)
    mean, var, vals = ritz_statistics(pen2d, sub, grid)
    col = coll.collocate_subspace(pen2d, grid, 2, ref)
    cm, cv = col.value_statistics()
    assert np.allclose(mean, cm, rtol=1e-6)
    pt = grid.points[3]
    assert np.allclose(ritz_values(pen2d, sub.evaluate(pt)[0], pt), vals[3], rtol=1e-10)
    # Ritz values bound the eigenvalues from above at every point
    assert np.all(vals >= col.values * (1 - 1e-12))


def test_coefficient_file_roundtrip(tmp_path, converged):
    sol = converged[0.02]
    A = sol.index_set
    write_coefficients(tmp_path / "c.txt", A, sol.vector)
    meta, data = read_coefficients(tmp_path / "c.txt")
    assert int(meta["P"]) == len(A) and np.array_equal(data, sol.vector)
    assert np.allclose(pc_evaluate(A, data, np.zeros((1, 3)))[0], sol.evaluate(np.zeros((1, 3)))[1][0])


def test_subspace_type():
    assert SpectralSubspace.__dataclass_fields__.keys() >= {"basis", "report"}
