"""Dataset generation, experiment execution, reporting, validation, CLI."""

from .data import MixtureSample, generate_gaussian_mixture, load_dataset, save_dataset
from .experiment import ExperimentReport, run_experiment
from .validate import CheckResult, run_validate_suite

__all__ = [
    "MixtureSample",
    "generate_gaussian_mixture",
    "load_dataset",
    "save_dataset",
    "ExperimentReport",
    "run_experiment",
    "CheckResult",
    "run_validate_suite",
]
