"""p-version finite elements for cylindrical shells."""
from .assembly import BOUNDARY_CONDITIONS, OneD, ShellProblem, TwoD, assemble, dof_count
from .basis import energy_quadrature, hierarchic_1d
from .geometry import ShellGeometry
from .pencil import AffinePencil
from .strains import COMPONENTS, MODELS, STRAINS, Strains, strains_1d, strains_2d

__all__ = [
    "AffinePencil", "BOUNDARY_CONDITIONS", "COMPONENTS", "MODELS", "OneD", "STRAINS",
    "ShellGeometry", "ShellProblem", "Strains", "TwoD", "assemble", "dof_count",
    "energy_quadrature", "hierarchic_1d", "strains_1d", "strains_2d",
]
