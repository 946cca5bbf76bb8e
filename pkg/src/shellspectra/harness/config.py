"""Experiment configuration read from TOML.

A config file holds flat ``key = value`` pairs (optionally under an
``[experiment]`` table).  Every key overrides the experiment's defaults;
unknown keys are rejected.  Example::

    experiment = "validate-1d"
    t = 0.01
    p = 8
    k = 6
    eps_values = [0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005, 0.0002]
    eps = 1e-4
    out = "results/validate-1d"
"""
from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from ..errors import InvalidParameterError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXPERIMENTS = ("calibrate", "validate-1d", "validate-2d", "crossing", "asymptotics", "general-2d")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "validate-1d"
    model: str = "naghdi"
    family: str = "axial"
    nu: float = 1.0 / 3.0
    t: float = 0.01
    t_values: tuple = ()
    p: int = 8
    p_values: tuple = ()
    p_overkill: int = 10
    elements: int = 16
    nx: int = 16
    ny: int = 8
    k: int = -1              # -1: choose the minimizing wavenumber
    k_max: int = 20
    wavenumbers: tuple = (6, 7)
    S: int = 1
    eps: float = 1e-4        # governing (overkill) threshold
    eps_values: tuple = ()   # convergence sweep thresholds
    eta_sigma: float = 2.0   # eta_m = (m + 1)^-sigma
    solver: str = "both"     # collocation | galerkin | both
    tol: float = 1e-8
    inner_tol: float = 1e-10
    maxiter: int = 100
    fit_tail: int = 4
    control_t: float = 0.01
    slice_points: int = 21
    slice_rest: float = 0.5
    models: tuple = ("naghdi", "mathematical")
    grid_x: int = 33
    grid_y: int = 33
    export_pencil: bool = False
    slow: bool = False
    out: str = "results"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise InvalidParameterError(f"unknown experiment {self.experiment!r}")
        if self.solver not in ("collocation", "galerkin", "both"):
            raise InvalidParameterError(f"unknown solver {self.solver!r}")
        if not 0 < self.eps < 1:
            raise InvalidParameterError("eps must lie in (0, 1)")
        for name in ("t_values", "p_values", "eps_values", "wavenumbers", "models"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


def default_config(experiment: str, slow: bool = False) -> ExperimentConfig:
    """Defaults reproducing the reference setting of each experiment."""
    common = dict(experiment=experiment, slow=slow, out=f"results/{experiment}")
    if experiment == "calibrate":
        return ExperimentConfig(**common, t_values=(0.1, 0.01, 0.001), p_values=tuple(range(2, 9)),
                                p_overkill=10, eps=1e-4)
    if experiment == "validate-1d":
        return ExperimentConfig(**common, t=0.01, p=8, k=6, eps=1e-4,
                                eps_values=(1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4),
                                fit_tail=5)
    if experiment == "validate-2d":
        if slow:
            return ExperimentConfig(**common, t=0.01, p=6, S=2, eps=5e-4,
                                    eps_values=(1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3))
        return ExperimentConfig(**common, t=0.01, p=5, nx=4, ny=8, S=2, eps=2e-2,
                                eps_values=(2e-1, 1e-1, 5e-2))
    if experiment == "crossing":
        return ExperimentConfig(**common, t=0.0067, p=8, eps=1e-4, wavenumbers=(6, 7),
                                control_t=0.01, S=4)
    if experiment == "asymptotics":
        return ExperimentConfig(**common, t_values=tuple(np.logspace(-3, -1, 7)), p=8, eps=1e-4,
                                k_max=20)
    if experiment == "general-2d":
        if slow:
            return ExperimentConfig(**common, family="general", t=0.01, p=6, S=2, eps=5e-4)
        return ExperimentConfig(**common, family="general", t=0.01, p=5, nx=4, ny=8, S=2, eps=5e-2,
                                grid_x=17, grid_y=17)
    raise InvalidParameterError(f"unknown experiment {experiment!r}")


def load_config(path, experiment: str | None = None, slow: bool = False) -> ExperimentConfig:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    if "experiment" in data and isinstance(data["experiment"], dict):
        data = data["experiment"]
    name = experiment or data.get("experiment")
    if name is None:
        raise InvalidParameterError("config does not name an experiment")
    if experiment and data.get("experiment", experiment) != experiment:
        raise InvalidParameterError(
            f"config is for {data['experiment']!r}, command asked for {experiment!r}")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(data) - known
    if unknown:
        raise InvalidParameterError(f"unknown config keys: {sorted(unknown)}")
    slow = bool(data.get("slow", slow)) or slow
    base = default_config(name, slow=slow)
    data = {k: v for k, v in data.items() if k != "experiment"}
    data["slow"] = slow
    return replace(base, **data)
