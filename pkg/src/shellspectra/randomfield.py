"""Affine random Young's modulus ``E(x, y, xi) = E_0 + sum_m E_m(x, y) xi_m``.

Coefficients follow ``E_m = mean * (m + 1)^-2 * phi_m`` with two shape
families: ``axial`` (``sin(pi m x)`` for every m) and ``general`` (axial
sines for odd m, angular ``sin(m y)`` for even m).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidFieldError, InvalidParameterError

FAMILIES = ("axial", "general")


def shape(family: str, m: int, x, y=0.0):
    """Shape function ``phi_m(x, y)`` of the given family."""
    if m < 1:
        raise InvalidParameterError("term index m must be >= 1")
    if family == "axial" or (family == "general" and m % 2 == 1):
        return np.sin(np.pi * m * np.asarray(x, dtype=float)) + 0.0 * np.asarray(y, dtype=float)
    if family == "general":
        return np.sin(m * np.asarray(y, dtype=float)) + 0.0 * np.asarray(x, dtype=float)
    raise InvalidParameterError(f"unknown field family {family!r}")


@dataclass(frozen=True)
class FieldExpansion:
    """Truncated affine expansion of the Young's modulus.

    Parameters
    ----------
    family : {"axial", "general"}
    truncation : int
        Number of random terms ``M``.
    mean_value : float
        ``E_0``; the experiments use 1.
    amplitudes : sequence of float, optional
        Overrides the default ``mean_value * (m + 1)^-2``.
    """

    family: str = "axial"
    truncation: int = 0
    mean_value: float = 1.0
    amplitudes: tuple = field(default=None)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameterError(f"unknown field family {self.family!r}")
        if self.truncation < 0:
            raise InvalidParameterError("truncation must be nonnegative")
        if self.amplitudes is None:
            amps = tuple(self.mean_value * (m + 1.0) ** -2 for m in range(1, self.truncation + 1))
            object.__setattr__(self, "amplitudes", amps)
        else:
            amps = tuple(float(a) for a in self.amplitudes)
            if len(amps) != self.truncation:
                raise InvalidParameterError("need one amplitude per term")
            object.__setattr__(self, "amplitudes", amps)
        if positivity_margin(self) <= 0.0:
            raise InvalidFieldError(
                f"sum of coefficient sup norms {sum(map(abs, self.amplitudes)):.4g} "
                f"is not below the mean {self.mean_value:.4g}")

    @property
    def M(self) -> int:
        return self.truncation

    def coefficient(self, m: int, x, y=0.0):
        """``E_m(x, y)``; ``m = 0`` returns the constant mean."""
        if m == 0:
            return self.mean_value + 0.0 * np.asarray(x, dtype=float) * np.asarray(y, dtype=float)
        return self.amplitudes[m - 1] * shape(self.family, m, x, y)

    def coefficients(self, x, y=0.0) -> np.ndarray:
        """Stack ``E_0..E_M`` evaluated at ``(x, y)``: shape ``(M + 1, *x.shape)``."""
        x = np.asarray(x, dtype=float)
        y = np.broadcast_to(np.asarray(y, dtype=float), x.shape)
        return np.stack([self.coefficient(m, x, y) for m in range(self.M + 1)])

    def with_truncation(self, truncation: int) -> "FieldExpansion":
        return FieldExpansion(self.family, truncation, self.mean_value)

    def deterministic(self) -> "FieldExpansion":
        return FieldExpansion(self.family, 0, self.mean_value)


def evaluate(f: FieldExpansion, x, y, xi) -> np.ndarray:
    """``E_0 + sum_{m <= M} E_m(x, y) xi_m``; missing ``xi`` entries count as zero."""
    xi = np.asarray(xi, dtype=float).ravel()
    out = f.coefficient(0, x, y)
    for m in range(1, min(f.M, len(xi)) + 1):
        if xi[m - 1] != 0.0:
            out = out + f.coefficient(m, x, y) * xi[m - 1]
    return out


def positivity_margin(f: FieldExpansion) -> float:
    """``inf E_0 - sum_m ||E_m||_inf``; positive for every admissible field."""
    # every shape function attains sup |phi_m| = 1 on the cylinder
    return f.mean_value - sum(abs(a) for a in f.amplitudes)


def series_limit_margin(mean_value: float = 1.0) -> float:
    """Margin of the untruncated series: ``mean * (2 - pi^2 / 6)``."""
    return mean_value * (2.0 - np.pi ** 2 / 6.0)
