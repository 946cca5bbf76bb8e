"""Least-squares rate fits on log-transformed convergence data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError

MIN_TAIL = 4


@dataclass(frozen=True)
class RateFit:
    """Line fitted to ``(log x, log y)`` (``kind="loglog"``) or ``(x, log y)`` (``"loglinear"``).

    For log-log data ``slope`` is the algebraic exponent; for log-linear data
    ``base = exp(-slope)`` is the per-unit reduction factor (``y ~ base^-x``).
    """

    kind: str
    abscissae: tuple
    values: tuple
    slope: float
    intercept: float
    residual: float

    @property
    def exponent(self) -> float:
        return self.slope

    @property
    def base(self) -> float:
        return float(np.exp(-self.slope))

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        X = np.log(x) if self.kind == "loglog" else x
        return np.exp(self.intercept + self.slope * X)


def fit_rate(x, y, kind="loglog", tail=None) -> RateFit:
    """Ordinary least squares on the last ``tail`` points (all if ``None``)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if tail is not None:
        x, y = x[-tail:], y[-tail:]
    if len(x) < MIN_TAIL:
        raise InvalidParameterError(f"rate fits need at least {MIN_TAIL} points, got {len(x)}")
    if np.any(y <= 0):
        raise InvalidParameterError("rate fits need positive values")
    X = np.log(x) if kind == "loglog" else x
    Y = np.log(y)
    A = np.vstack([X, np.ones_like(X)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, Y, rcond=None)
    res = float(np.sqrt(np.mean((A @ np.array([slope, intercept]) - Y) ** 2)))
    return RateFit(kind, tuple(x), tuple(y), float(slope), float(intercept), res)
