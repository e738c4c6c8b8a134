"""Dynamic multi-objective optimisation with regression-transfer population seeding."""

from __future__ import annotations

import logging

from .config import ConfigurationError, ExperimentConfig, load_config
from .coordinator import ExperimentCoordinator, run_experiment
from .report import write_report

_LOGGER: logging.Logger = logging.getLogger(__package__)

__all__ = [
    "ConfigurationError",
    "ExperimentConfig",
    "ExperimentCoordinator",
    "load_config",
    "run_experiment",
    "write_report",
]
