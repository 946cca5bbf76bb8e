"""Experiment configuration, drivers, rate fits and CSV output."""
from .config import EXPERIMENTS, ExperimentConfig, default_config, load_config
from .experiments import RUNNERS, ExperimentResult, run
from .fitting import RateFit, fit_rate
from .tables import read_table, write_table

__all__ = ["EXPERIMENTS", "ExperimentConfig", "default_config", "load_config", "RUNNERS",
           "ExperimentResult", "run", "RateFit", "fit_rate", "read_table", "write_table"]
