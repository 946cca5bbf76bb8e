import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import legendre as npleg

from shellspectra.multiindex import MultiIndex, MultiIndexSet, generate_set, total_degree_set
from shellspectra.polychaos import (build_moment_matrices, evaluate_basis, first_moment,
                                    gauss_nodes, lagrange_value, legendre_value, pc_mean_var,
                                    triple_product)

E1 = MultiIndex.unit(1)


def oracle_legendre(n, x):
    # classical Legendre from numpy, scaled to unit mean square under dx/2
    c = np.zeros(n + 1)
    c[n] = 1.0
    return np.sqrt(2 * n + 1) * npleg.legval(x, c)


def test_legendre_examples():
    assert legendre_value(0, 0.3) == pytest.approx(1.0)
    assert legendre_value(1, 1.0) == pytest.approx(np.sqrt(3), abs=1e-7)
    assert legendre_value(2, 1.0) == pytest.approx(np.sqrt(5), abs=1e-7)


@pytest.mark.parametrize("n", range(12))
def test_legendre_against_numpy(n):
    x = np.linspace(-1, 1, 17)
    assert np.allclose(legendre_value(n, x), oracle_legendre(n, x), atol=1e-12)


def test_gauss_examples():
    r = gauss_nodes(0)
    assert r.nodes.tolist() == [0.0] and r.weights.tolist() == pytest.approx([1.0])
    r = gauss_nodes(1)
    assert np.allclose(r.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)]) and np.allclose(r.weights, 0.5)
    r = gauss_nodes(2)
    assert np.allclose(r.nodes, [-np.sqrt(0.6), 0, np.sqrt(0.6)])
    assert np.allclose(r.weights, [5 / 18, 8 / 18, 5 / 18])
    assert r.nodes[1] == 0.0


@pytest.mark.parametrize("p", range(0, 15))
def test_gauss_against_numpy(p):
    x, w = npleg.leggauss(p + 1)
    r = gauss_nodes(p)
    assert np.allclose(r.nodes, x, atol=1e-14) and np.allclose(r.weights, w / 2, atol=1e-14)


def test_orthonormality():
    r = gauss_nodes(12)
    for a in range(11):
        for b in range(11):
            val = r.integrate(legendre_value(a, r.nodes) * legendre_value(b, r.nodes))
            assert val == pytest.approx(float(a == b), abs=1e-12)


def test_lagrange_examples():
    assert lagrange_value(gauss_nodes(0), 0, 0.7) == pytest.approx(1.0)
    r = gauss_nodes(1)
    assert lagrange_value(r, 0, r.nodes[0]) == pytest.approx(1.0)
    assert lagrange_value(r, 0, r.nodes[1]) == pytest.approx(0.0, abs=1e-15)
    assert lagrange_value(r, 0, 0.0) == pytest.approx(0.5)


def test_triple_and_first_moment_examples():
    Z = MultiIndex()
    assert triple_product(Z, Z, Z) == pytest.approx(1.0)
    assert triple_product(E1, E1, E1) == pytest.approx(0.0, abs=1e-15)
    assert triple_product(E1, E1, MultiIndex.unit(1, 2)) == pytest.approx(2 / np.sqrt(5))
    assert first_moment(1, E1, E1) == 0.0
    assert first_moment(1, Z, E1) == pytest.approx(1 / np.sqrt(3))
    assert first_moment(1, E1, MultiIndex.unit(1, 2)) == pytest.approx(2 / np.sqrt(15))


def quad_triple(alpha, beta, gamma, ndim, npts=8):
    r = gauss_nodes(npts - 1)
    grids = np.meshgrid(*[r.nodes] * ndim, indexing="ij")
    w = np.ones_like(grids[0])
    for g in np.meshgrid(*[r.weights] * ndim, indexing="ij"):
        w = w * g
    xi = np.stack([g.ravel() for g in grids], axis=1)
    A = MultiIndexSet([MultiIndex(), alpha, beta, gamma])
    L = evaluate_basis(A, xi)
    pos = [A.position(a) for a in (alpha, beta, gamma)]
    return float(np.sum(w.ravel() * L[:, pos[0]] * L[:, pos[1]] * L[:, pos[2]]))


def test_moment_matrices_small_examples():
    mm = build_moment_matrices(MultiIndexSet([MultiIndex()]))
    assert mm.G[0].toarray().tolist() == [[1.0]]
    assert mm.Galpha[MultiIndex()].toarray().tolist() == [[1.0]]
    mm = build_moment_matrices(MultiIndexSet([MultiIndex(), E1]))
    ref = [[0, 1 / np.sqrt(3)], [1 / np.sqrt(3), 0]]
    assert np.allclose(mm.G[1].toarray(), ref)
    assert np.allclose(mm.Galpha[E1].toarray(), np.eye(2)[::-1])


def test_moment_matrices_against_quadrature():
    A = total_degree_set(3, 3)
    mm = build_moment_matrices(A)
    r = gauss_nodes(7)
    grids = np.meshgrid(*[r.nodes] * 3, indexing="ij")
    w = np.prod(np.meshgrid(*[r.weights] * 3, indexing="ij"), axis=0).ravel()
    xi = np.stack([g.ravel() for g in grids], axis=1)
    L = evaluate_basis(A, xi)
    for m in range(4):
        f = np.ones(len(w)) if m == 0 else xi[:, m - 1]
        G = np.einsum("q,qa,qb->ab", w * f, L, L)
        assert np.allclose(mm.G[m].toarray(), G, atol=1e-12)
    for a, alpha in enumerate(A):
        G = np.einsum("q,qb,qc->bc", w * L[:, a], L, L)
        assert np.allclose(mm.Galpha[alpha].toarray(), G, atol=1e-12)


def test_first_moment_bandwidth():
    A = generate_set(None, 1e-2)
    mm = build_moment_matrices(A)
    for m in range(1, mm.M + 1):
        G = mm.G[m].tocoo()
        assert (abs(G - G.T) > 0).nnz == 0
        for i, j in zip(G.row, G.col):
            a, b = A[i], A[j]
            assert abs(a[m] - b[m]) == 1 and a.shifted(m, -a[m]) == b.shifted(m, -b[m])


def test_pc_mean_var_examples():
    assert pc_mean_var([5, 0, 0]) == (5.0, 0.0)
    assert pc_mean_var([0, 1]) == (0.0, 1.0)
    assert pc_mean_var([2, 3, 4]) == (2.0, 25.0)


@settings(max_examples=10, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=6, max_size=6), st.integers(0, 2 ** 31))
def test_pc_mean_var_monte_carlo(coeffs, seed):
    A = total_degree_set(2, 2)
    v = np.array(coeffs)
    rng = np.random.default_rng(seed)
    xi = rng.uniform(-1, 1, (100_000, 2))
    f = evaluate_basis(A, xi) @ v
    mean, var = pc_mean_var(v)
    se_mean = np.sqrt(var / len(f)) + 1e-12
    assert abs(f.mean() - mean) <= 3 * se_mean + 1e-9
    se_var = np.std((f - f.mean()) ** 2) / np.sqrt(len(f)) + 1e-12
    assert abs(f.var() - var) <= 3 * se_var + 1e-9


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=6, max_size=6),
       st.lists(st.floats(-1, 1), min_size=6, max_size=6))
def test_delta_is_galerkin_product(s, w):
    A = total_degree_set(2, 2)
    mm = build_moment_matrices(A)
    r = gauss_nodes(5)
    X, Y = np.meshgrid(r.nodes, r.nodes, indexing="ij")
    W = np.outer(r.weights, r.weights).ravel()
    L = evaluate_basis(A, np.stack([X.ravel(), Y.ravel()], axis=1))
    prod = (L @ np.array(s)) * (L @ np.array(w))
    proj = L.T @ (W * prod)
    assert np.allclose(mm.delta(s) @ np.array(w), proj, atol=1e-12)
    assert np.allclose(mm.galerkin_product(s, np.array(w)), proj, atol=1e-12)


def test_contract_is_adjoint_of_delta():
    A = total_degree_set(2, 3)
    mm = build_moment_matrices(A)
    rng = np.random.default_rng(0)
    s, Q = rng.normal(size=mm.P), rng.normal(size=(mm.P, mm.P))
    assert np.sum(mm.delta(s) * Q) == pytest.approx(s @ mm.contract(Q))


def test_backends_agree():
    A = generate_set(None, 2e-3)
    a = build_moment_matrices(A, backend="python")
    b = build_moment_matrices(A)
    for x, y in zip(a.unique_triples, b.unique_triples):
        assert np.array_equal(x, y)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=6, max_size=6))
def test_triple_product_against_quadrature(e):
    alpha, beta = MultiIndex.from_dense(e[:2]), MultiIndex.from_dense(e[2:4])
    gamma = MultiIndex.from_dense(e[4:])
    assert triple_product(alpha, beta, gamma) == pytest.approx(
        quad_triple(alpha, beta, gamma, 2), abs=1e-12)
