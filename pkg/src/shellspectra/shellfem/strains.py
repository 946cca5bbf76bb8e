"""Linear strain operators of the Reissner-Naghdi and mathematical shell models.

Each strain is a short linear combination of displacement components and
their first derivatives.  The tables below store it as a list of
``(component, derivative, coefficient)`` terms with derivative ``0`` (value),
``1`` (d/dx) or ``2`` (d/dy).  Assembly and pointwise evaluation both read
the same tables.
"""
from typing import NamedTuple

import numpy as np

from ..errors import InvalidParameterError

COMPONENTS = ("u", "v", "w", "theta", "psi")
STRAINS = ("k11", "k22", "k12", "b11", "b22", "b12", "r1", "r2")
MODELS = ("naghdi", "mathematical")

U, V, W, TH, PS = range(5)
VAL, DX, DY = 0, 1, 2


class Strains(NamedTuple):
    k11: object
    k22: object
    k12: object
    b11: object
    b22: object
    b12: object
    r1: object
    r2: object


def _check_model(model):
    if model not in MODELS:
        raise InvalidParameterError(f"unknown shell model {model!r}")


def strain_terms_2d(model: str, curvature=(0.0, 1.0, 0.0)):
    """Term tables for the 2D strains; ``curvature`` is ``(a, b, c)``.

    The Naghdi table is the cylinder form and ignores ``curvature``.
    """
    _check_model(model)
    if model == "naghdi":
        return [
            [(TH, DX, 1.0)],
            [(PS, DY, 1.0)],
            [(PS, DX, 0.5), (TH, DY, 0.5), (V, DX, -0.5)],
            [(U, DX, 1.0)],
            [(V, DY, 1.0), (W, VAL, 1.0)],
            [(V, DX, 0.5), (U, DY, 0.5)],
            [(W, DX, 1.0), (TH, VAL, -1.0)],
            [(W, DY, 1.0), (V, VAL, -1.0), (PS, VAL, -1.0)],
        ]
    a, b, c = curvature
    return [
        [(TH, DX, 1.0)],
        [(PS, DY, 1.0)],
        [(TH, DY, 0.5), (PS, DX, 0.5)],
        [(U, DX, 1.0), (W, VAL, a)],
        [(V, DY, 1.0), (W, VAL, b)],
        [(U, DY, 0.5), (V, DX, 0.5), (W, VAL, c)],
        [(W, DX, 1.0), (TH, VAL, -1.0)],
        [(W, DY, 1.0), (PS, VAL, -1.0)],
    ]


def strain_terms_1d(model: str, k: float, curvature=(0.0, 1.0, 0.0)):
    """Term tables for the Fourier-reduced strains (derivatives are d/dx only).

    Under the ansatz ``u, w, theta ~ cos(ky)`` and ``v, psi ~ sin(ky)`` each
    strain carries a single trigonometric factor that is dropped here.
    """
    _check_model(model)
    k = float(k)
    if model == "naghdi":
        return [
            [(TH, DX, 1.0)],
            [(PS, VAL, k)],
            [(PS, DX, 0.5), (TH, VAL, -0.5 * k), (V, DX, -0.5)],
            [(U, DX, 1.0)],
            [(V, VAL, k), (W, VAL, 1.0)],
            [(V, DX, 0.5), (U, VAL, -0.5 * k)],
            [(W, DX, 1.0), (TH, VAL, -1.0)],
            [(W, VAL, -k), (V, VAL, -1.0), (PS, VAL, -1.0)],
        ]
    a, b, c = curvature
    return [
        [(TH, DX, 1.0)],
        [(PS, VAL, k)],
        [(TH, VAL, -0.5 * k), (PS, DX, 0.5)],
        [(U, DX, 1.0), (W, VAL, a)],
        [(V, VAL, k), (W, VAL, b)],
        [(U, VAL, -0.5 * k), (V, DX, 0.5), (W, VAL, c)],
        [(W, DX, 1.0), (TH, VAL, -1.0)],
        [(W, VAL, -k), (PS, VAL, -1.0)],
    ]


def _evaluate(table, fields):
    def get(comp, deriv):
        name = COMPONENTS[comp] + ("", "_x", "_y")[deriv]
        return np.asarray(fields.get(name, 0.0), dtype=float)

    return Strains(*[sum(coef * get(comp, deriv) for comp, deriv, coef in row) for row in table])


def strains_2d(model: str, geometry, fields) -> Strains:
    """Evaluate the 2D strains.

    ``fields`` maps ``u, v, w, theta, psi`` and their derivatives
    ``u_x, u_y, ...`` to arrays; missing entries count as zero.
    """
    return _evaluate(strain_terms_2d(model, geometry.curvature), fields)


def strains_1d(model: str, k: float, fields, curvature=(0.0, 1.0, 0.0)) -> Strains:
    """Evaluate the 1D (Fourier-reduced) strains from profiles and ``*_x`` derivatives."""
    return _evaluate(strain_terms_1d(model, k, curvature), fields)


def constitutive_factor(t: float, nu: float) -> np.ndarray:
    """Lower factor ``L`` with ``L L^T`` the 8x8 energy matrix on the strain vector.

    Energy density is ``t^3 Q(kappa) + 12 t Q(beta) + 6 (1 - nu) t |rho|^2``
    with ``Q(x) = x^T D x`` and ``D = [[1, nu, 0], [nu, 1, 0], [0, 0, 2(1 - nu)]]``.
    """
    D = np.array([[1.0, nu, 0.0], [nu, 1.0, 0.0], [0.0, 0.0, 2.0 * (1.0 - nu)]])
    C = np.zeros((8, 8))
    C[0:3, 0:3] = t ** 3 * D
    C[3:6, 3:6] = 12.0 * t * D
    C[6:8, 6:8] = 6.0 * (1.0 - nu) * t * np.eye(2)
    return np.linalg.cholesky(C)
