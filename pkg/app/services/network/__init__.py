"""
Dense MLP engine: parameters, forward/backward passes, losses and metrics.
"""

from .batch import Batch
from .gradcheck import check_gradient, finite_difference
from .losses import AccuracyRule, accuracy, loss_value
from .mlp import GradResult, forward, loss_and_grads, loss_grad
from .params import ParamVector, init_params, scale_params, weight_norm

__all__ = [
    "AccuracyRule",
    "Batch",
    "GradResult",
    "ParamVector",
    "accuracy",
    "check_gradient",
    "finite_difference",
    "forward",
    "init_params",
    "loss_and_grads",
    "loss_grad",
    "loss_value",
    "scale_params",
    "weight_norm",
]
