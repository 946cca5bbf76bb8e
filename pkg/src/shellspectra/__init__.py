"""Stochastic eigenpairs of thin cylindrical shells with random Young's modulus."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
