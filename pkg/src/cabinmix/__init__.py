"""Cabin configuration model: emissions, revenue and repricing for 3-class versus all-economy cabins."""

from .cabin import ALL_ECONOMY, BASELINE, Scenario, resolve_scenario
from .emissions import AllocationStrategy
from .ingest import Dataset, load_dataset, validate_dataset
from .model import ModelRun, run_model
from .report import metric_tables, reconcile

__all__ = [
    "ALL_ECONOMY",
    "BASELINE",
    "AllocationStrategy",
    "Dataset",
    "ModelRun",
    "Scenario",
    "load_dataset",
    "metric_tables",
    "reconcile",
    "resolve_scenario",
    "run_model",
    "validate_dataset",
]

__version__ = "0.1.0"
