"""Configuration, orchestration, persistence and the command line."""
from .config import ConfigError, ExperimentConfig, config_from_dict, load_config
from .output import CSV_COLUMNS, emit
from .runner import RunReport, SweepResult, run_single, run_sweep

__all__ = [
    "CSV_COLUMNS",
    "ConfigError",
    "ExperimentConfig",
    "RunReport",
    "SweepResult",
    "config_from_dict",
    "emit",
    "load_config",
    "run_single",
    "run_sweep",
]
