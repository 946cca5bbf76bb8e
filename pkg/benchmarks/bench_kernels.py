"""Compiled versus pure-Python kernels.

Times the moment-tensor build and the matrix-free Galerkin product with each
backend and checks that both give the same numbers.

    python benchmarks/bench_kernels.py [--eps 1e-3] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from shellspectra import kernels
from shellspectra.multiindex import generate_set
from shellspectra.polychaos import build_moment_matrices
from shellspectra.randomfield import FieldExpansion
from shellspectra.shellfem import OneD, ShellProblem, assemble


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", type=float, default=1e-3, help="index set threshold")
    ap.add_argument("--p", type=int, default=6, help="polynomial degree of the 1D pencil")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if kernels.compiled_backend is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")

    A = generate_set(None, args.eps)
    pen = assemble(ShellProblem(mode=OneD(k=6, elements=16), p=args.p,
                                field=FieldExpansion("axial", A.max_active_dim)))
    V = np.random.default_rng(0).normal(size=(len(A), pen.N))
    print(f"#A = {len(A)}, M_A = {A.max_active_dim}, N = {pen.N}, default backend: {kernels.BACKEND}")

    rows = []
    out = {}
    for backend in ("compiled", "python"):
        mm = build_moment_matrices(A, backend=backend)
        t_moments = best_of(lambda: build_moment_matrices(A, backend=backend), args.repeat)
        t_apply = best_of(lambda: pen.galerkin_apply(V, mm, backend=backend), args.repeat)
        out[backend] = (mm, pen.galerkin_apply(V, mm, backend=backend))
        rows.append((backend, t_moments, t_apply))

    (mc, yc), (mp, yp) = out["compiled"], out["python"]
    assert np.allclose(mc.tri_val, mp.tri_val, rtol=1e-14)
    assert np.allclose(yc, yp, rtol=1e-12, atol=1e-10 * np.abs(yp).max())

    print(f"{'backend':<10} {'moments [s]':>12} {'galerkin apply [s]':>20}")
    for name, tm, ta in rows:
        print(f"{name:<10} {tm:>12.4f} {ta:>20.4f}")
    (_, cm, ca), (_, pm, pa) = rows
    print(f"speed-up   {pm / cm:>12.1f}x {pa / ca:>19.1f}x")


if __name__ == "__main__":
    main()
