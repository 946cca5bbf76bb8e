import numpy as np
import pytest

from shellspectra import kernels
from shellspectra.multiindex import generate_set
from shellspectra.polychaos import build_moment_matrices, univariate_triple_table

needs_compiled = pytest.mark.skipif(kernels.compiled_backend is None,
                                    reason="compiled kernels not built")


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "python")


@needs_compiled
def test_galerkin_kernel_backends_agree():
    rng = np.random.default_rng(0)
    mm = build_moment_matrices(generate_set(None, 2e-3))
    S = rng.normal(size=(mm.P, 50, 8))
    rho = rng.normal(size=(mm.M + 1, 50))
    args = (S, rho, mm.first_m, mm.first_row, mm.first_col, mm.first_val)
    a = kernels.galerkin_weighted_product(*args, backend="python")
    b = kernels.galerkin_weighted_product(*args, backend="compiled")
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


def test_galerkin_kernel_against_einsum():
    rng = np.random.default_rng(1)
    mm = build_moment_matrices(generate_set(None, 5e-2))
    S = rng.normal(size=(mm.P, 7, 8))
    rho = rng.normal(size=(mm.M + 1, 7))
    out = kernels.galerkin_weighted_product(S, rho, mm.first_m, mm.first_row, mm.first_col,
                                            mm.first_val)
    ref = np.zeros_like(S)
    for m, G in enumerate(mm.G):
        ref += np.einsum("ab,q,bqr->aqr", G.toarray(), rho[m], S)
    assert np.allclose(out, ref, atol=1e-13)


@needs_compiled
def test_triple_kernel_backends_agree():
    A = generate_set(None, 1e-3)
    ptr, dims, exps = [0], [], []
    for a in A:
        for d, e in a.items:
            dims.append(d)
            exps.append(e)
        ptr.append(len(dims))
    table = univariate_triple_table(max(a.degree for a in A))
    a = kernels.triple_product_coo(ptr, dims, exps, table, backend="python")
    b = kernels.triple_product_coo(ptr, dims, exps, table, backend="compiled")
    oa, ob = np.lexsort(a[:3][::-1]), np.lexsort(b[:3][::-1])
    for i in range(3):
        assert np.array_equal(a[i][oa], b[i][ob])
    assert np.allclose(a[3][oa], b[3][ob], rtol=1e-15)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.galerkin_weighted_product(np.zeros((1, 1, 8)), np.zeros((1, 1)), [0], [0], [0],
                                          [1.0], backend="fortran")
