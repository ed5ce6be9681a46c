from .config import CONFIG_KEYS, ExperimentConfig, load_config, load_preset, parse_config
from .dataset import DataPoint, DataSet, load_dataset, load_datasets
from .errors import ConfigError, DatasetError
from .outputs import emit_outputs
from .residues import ResidueEntry, ResidueReport, residues
from .runner import ScenarioResult, model_evaluator, run_scenario
from .settings import HarnessSettings

__all__ = [
    "CONFIG_KEYS",
    "ExperimentConfig",
    "load_config",
    "load_preset",
    "parse_config",
    "DataPoint",
    "DataSet",
    "load_dataset",
    "load_datasets",
    "ConfigError",
    "DatasetError",
    "emit_outputs",
    "ResidueEntry",
    "ResidueReport",
    "residues",
    "ScenarioResult",
    "model_evaluator",
    "run_scenario",
    "HarnessSettings",
]
