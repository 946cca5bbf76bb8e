"""Shell problem description and assembly of the affine pencil."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from ..errors import InvalidParameterError, UnsupportedError
from ..randomfield import FieldExpansion
from .basis import energy_quadrature
from .geometry import ShellGeometry
from .pencil import AffinePencil
from .spaces import Space1D, Space2D
from .strains import MODELS, constitutive_factor, strain_terms_1d, strain_terms_2d

BOUNDARY_CONDITIONS = ("clamped",)


@dataclass(frozen=True)
class OneD:
    """Fourier-reduced problem for angular wavenumber ``k``."""

    k: int = 0
    ansatz: str = "u1"
    elements: int = 16


@dataclass(frozen=True)
class TwoD:
    nx: int = 16
    ny: int = 8


@dataclass(frozen=True)
class ShellProblem:
    geometry: ShellGeometry = dc_field(default_factory=ShellGeometry.cylinder)
    model: str = "naghdi"
    t: float = 0.01
    nu: float = 1.0 / 3.0
    field: FieldExpansion = dc_field(default_factory=FieldExpansion)
    bc: str = "clamped"
    mode: object = dc_field(default_factory=OneD)
    p: int = 6
    quad_extra: int = 4

    def __post_init__(self):
        if not self.t > 0:
            raise InvalidParameterError("thickness must be positive")
        if not 0.0 <= self.nu < 0.5:
            raise InvalidParameterError("Poisson ratio must lie in [0, 1/2)")
        if self.model not in MODELS:
            raise InvalidParameterError(f"unknown shell model {self.model!r}")
        if self.p < 1:
            raise InvalidParameterError("polynomial degree must be >= 1")
        if not isinstance(self.mode, (OneD, TwoD)):
            raise InvalidParameterError("mode must be OneD or TwoD")

    def replace(self, **changes) -> "ShellProblem":
        return replace(self, **changes)


def _strain_tables(problem: ShellProblem):
    geom = problem.geometry
    if isinstance(problem.mode, OneD):
        if problem.mode.ansatz not in ("u1", "u2"):
            raise InvalidParameterError(f"unknown ansatz {problem.mode.ansatz!r}")
        # the second ansatz swaps sines and cosines, which flips the sign of k
        k = problem.mode.k if problem.mode.ansatz == "u1" else -problem.mode.k
        if problem.model == "mathematical" and geom.curvature[2] != 0.0:
            raise UnsupportedError("the Fourier reduction needs c = 0 in the curvature tensor")
        return strain_terms_1d(problem.model, k, geom.curvature)
    return strain_terms_2d(problem.model, geom.curvature)


def assemble(problem: ShellProblem) -> AffinePencil:
    """Discretize the problem into an :class:`AffinePencil`."""
    if problem.bc not in BOUNDARY_CONDITIONS:
        raise UnsupportedError(f"boundary condition {problem.bc!r} is not supported")
    geom = problem.geometry
    if problem.model == "naghdi" and not geom.is_cylinder:
        raise UnsupportedError("the Naghdi strains are implemented for the cylinder only")
    mode = problem.mode
    fld = problem.field
    if isinstance(mode, OneD):
        if fld.family != "axial" and fld.M >= 2:
            raise UnsupportedError("angular field terms do not separate under the Fourier ansatz")
        space = Space1D(problem.p, mode.elements, geom.x_range)
    else:
        space = Space2D(problem.p, mode.nx, mode.ny, geom.x_range)

    s, w = energy_quadrature(problem.p, problem.quad_extra)
    if space.dim == 1:
        tables = space.local_tables(s)
        qw = w * space.jacobian
    else:
        tables = space.local_tables(s)
        qw = np.outer(w, w).ravel() * space.jacobian
    nb = space.n_local
    nq = tables[0].shape[1]

    # reference strain operator B[q, r, c*nb + l], then fold in the constitutive factor
    terms = _strain_tables(problem)
    B = np.zeros((nq, 8, 5 * nb))
    for r, row in enumerate(terms):
        for comp, deriv, coef in row:
            if coef != 0.0:
                B[:, r, comp * nb:(comp + 1) * nb] += coef * tables[deriv].T
    L = constitutive_factor(problem.t, problem.nu)
    strain_op = np.einsum("rs,qrk->qsk", L, B)

    mass_op = np.zeros((nq, 5, 5 * nb))
    mscale = np.sqrt([problem.t] * 3 + [problem.t ** 3 / 12.0] * 2)
    for c in range(5):
        mass_op[:, c, c * nb:(c + 1) * nb] = mscale[c] * tables[0].T

    pts = space.quadrature_points(s)
    metric = geom.metric(pts[0])
    if np.any(geom.lame(pts[0])[1] <= 0.0):
        raise InvalidParameterError("singular geometry: A2 must stay positive")
    base = qw[None, :] * metric
    y = pts[1] if len(pts) > 1 else 0.0
    rho = fld.coefficients(pts[0], y) * base[None]
    mass_rho = base

    npc = space.n_per_comp
    fixed = np.zeros(5 * npc, dtype=bool)
    for c in range(5):
        fixed[c * npc + space.boundary] = True
    free_index = np.full(5 * npc, -1, dtype=np.int64)
    free_index[~fixed] = np.arange(int((~fixed).sum()))
    elem_dofs = np.concatenate(
        [free_index[c * npc + space.elem_nodes] for c in range(5)], axis=1)
    return AffinePencil(strain_op, mass_op, elem_dofs, rho, mass_rho, int((~fixed).sum()),
                        space=space, problem=problem, free_index=free_index)


def dof_count(problem: ShellProblem, constrained: bool = False) -> int:
    """Number of spatial dofs; ``constrained=True`` excludes clamped ones."""
    mode = problem.mode
    p = problem.p
    if isinstance(mode, OneD):
        n = 5 * (mode.elements * p + 1)
        return n - 10 if constrained else n
    nx, ny = mode.nx, mode.ny
    per = (nx + 1) * ny + nx * ny * (p - 1) + (nx + 1) * ny * (p - 1) + nx * ny * (p - 1) ** 2
    return 5 * (per - 2 * ny * p) if constrained else 5 * per
