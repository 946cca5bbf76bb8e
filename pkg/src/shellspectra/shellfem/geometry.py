"""Midsurface geometry of shells of revolution."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class ShellGeometry:
    """Profile-generated shell of revolution on ``x in x_range``.

    The surface is obtained by rotating ``f(x)`` about the axis.  Lamé
    parameters are ``A1 = sqrt(1 + f'^2)`` and ``A2 = f``; the principal
    radii are ``R1 = -A1^3 / f''`` and ``R2 = A1 A2``.  ``curvature`` holds the
    constant tensor ``(a, b, c)`` used by the mathematical shell model.
    """

    kind: str = "cylinder"
    profile: Optional[Callable] = None
    profile_d1: Optional[Callable] = None
    profile_d2: Optional[Callable] = None
    curvature: tuple = (0.0, 1.0, 0.0)
    x_range: tuple = (-1.0, 1.0)

    @classmethod
    def cylinder(cls, x_range=(-1.0, 1.0)) -> "ShellGeometry":
        """Unit-radius cylinder; the constant curvature choice is (0, 1, 0)."""
        return cls("cylinder", None, None, None, (0.0, 1.0, 0.0), tuple(x_range))

    @classmethod
    def from_profile(cls, f, df, d2f, curvature=(0.0, 1.0, 0.0), x_range=(-1.0, 1.0),
                     check_points: int = 201) -> "ShellGeometry":
        geom = cls("profile", f, df, d2f, tuple(curvature), tuple(x_range))
        x = np.linspace(*x_range, check_points)
        A1, A2 = geom.lame(x)
        if np.any(A2 <= 0.0) or np.any(A1 <= 0.0):
            raise InvalidParameterError("singular geometry: Lamé parameters must stay positive")
        return geom

    @property
    def is_cylinder(self) -> bool:
        return self.kind == "cylinder"

    def _f(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_cylinder:
            return np.ones_like(x), np.zeros_like(x), np.zeros_like(x)
        return (np.asarray(self.profile(x), dtype=float) + 0 * x,
                np.asarray(self.profile_d1(x), dtype=float) + 0 * x,
                np.asarray(self.profile_d2(x), dtype=float) + 0 * x)

    def lame(self, x):
        """``(A1, A2)`` at axial positions ``x``."""
        f, df, _ = self._f(x)
        return np.sqrt(1.0 + df * df), f

    def metric(self, x):
        """Area element ``A1 * A2``."""
        A1, A2 = self.lame(x)
        return A1 * A2

    def principal_curvatures(self, x):
        """``(1/R1, 1/R2)``; the cylinder gives ``(0, 1)``."""
        f, df, d2f = self._f(x)
        A1 = np.sqrt(1.0 + df * df)
        return -d2f / A1 ** 3, 1.0 / (A1 * f)

    def principal_radii(self, x):
        k1, k2 = self.principal_curvatures(x)
        with np.errstate(divide="ignore"):
            return 1.0 / k1, 1.0 / k2
