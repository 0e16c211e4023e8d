"""
Optimizers and norm projection.
"""

from .optimizers import (
    OptimState,
    decay_norm_prediction,
    opt_step,
    project_norm,
    step_array,
)

__all__ = ["OptimState", "decay_norm_prediction", "opt_step", "project_norm", "step_array"]
