"""Hot kernels with a compiled backend and a pure-Python fallback.

The compiled extension is used when it has been built and the environment
variable ``SHELLSPECTRA_PURE_PYTHON`` is unset or ``0``.  ``BACKEND`` names
the active implementation; both are importable directly for comparison.
"""
import os

import numpy as np

from . import _pykernels as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

_force_pure = os.environ.get("SHELLSPECTRA_PURE_PYTHON", "0") not in ("", "0")

if compiled_backend is not None and not _force_pure:
    _impl = compiled_backend
    BACKEND = "compiled"
else:
    _impl = python_backend
    BACKEND = "python"


def triple_product_coo(ptr, dims, exps, table, backend=None):
    impl = _select(backend)
    return impl.triple_product_coo(
        np.ascontiguousarray(ptr, dtype=np.int64),
        np.ascontiguousarray(dims, dtype=np.int64),
        np.ascontiguousarray(exps, dtype=np.int64),
        np.ascontiguousarray(table, dtype=np.float64),
    )


def galerkin_weighted_product(S, rho, g_m, g_row, g_col, g_val, backend=None):
    impl = _select(backend)
    return impl.galerkin_weighted_product(
        np.ascontiguousarray(S, dtype=np.float64),
        np.ascontiguousarray(rho, dtype=np.float64),
        np.ascontiguousarray(g_m, dtype=np.int64),
        np.ascontiguousarray(g_row, dtype=np.int64),
        np.ascontiguousarray(g_col, dtype=np.int64),
        np.ascontiguousarray(g_val, dtype=np.float64),
    )


def _select(backend):
    if backend is None:
        return _impl
    if backend == "python":
        return python_backend
    if backend == "compiled":
        if compiled_backend is None:
            raise ImportError("compiled kernels are not built")
        return compiled_backend
    raise ValueError(f"unknown backend {backend!r}")
