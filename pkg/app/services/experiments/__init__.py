"""
Training runs, sweeps and the de-grokking experiment.
"""

from .build import build_task, mnist_source
from .degrok import DEGROK_ALPHA, degrok_experiment
from .metrics import generalization_delay, parse_metric, time_to_level
from .schedule import logging_steps
from .sweep import config_for, fit_power_law, sweep, sweep_result
from .training import TrainingRun, joint_norm, run_training

__all__ = [
    "DEGROK_ALPHA",
    "TrainingRun",
    "build_task",
    "config_for",
    "degrok_experiment",
    "fit_power_law",
    "generalization_delay",
    "joint_norm",
    "logging_steps",
    "mnist_source",
    "parse_metric",
    "run_training",
    "sweep",
    "sweep_result",
    "time_to_level",
]
