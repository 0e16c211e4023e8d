"""
SGD, Adam and AdamW over flat parameter vectors, plus the constant-norm
projection used for reduced landscapes and norm-constrained training.
"""

import logging
import math

import numpy as np

from app.core.exceptions import DomainError, NumericError
from app.pydantic_models.network import OptimConfig
from app.services.network.params import ParamVector, weight_norm
from app.utils.constants import OptimizerKind

logger = logging.getLogger(__name__)


class OptimState:
    """
    Step counter and Adam moments of one parameter group.

    Moments stay zero for sgd.
    """

    def __init__(self, size: int, step_count: int = 0,
                 first_moment: np.ndarray | None = None,
                 second_moment: np.ndarray | None = None):
        self.step_count = step_count
        self.first_moment = np.zeros(size) if first_moment is None else first_moment
        self.second_moment = np.zeros(size) if second_moment is None else second_moment

    @classmethod
    def for_params(cls, p: ParamVector | np.ndarray) -> "OptimState":
        size = p.size if isinstance(p, ParamVector) else np.asarray(p).size
        return cls(size)

    def __repr__(self) -> str:
        return f"OptimState(step_count={self.step_count}, size={self.first_moment.size})"


def _adam_direction(cfg: OptimConfig, state: OptimState, g: np.ndarray) -> tuple[np.ndarray, OptimState]:
    t = state.step_count + 1
    first = cfg.beta1 * state.first_moment + (1 - cfg.beta1) * g
    second = cfg.beta2 * state.second_moment + (1 - cfg.beta2) * g * g
    first_hat = first / (1 - cfg.beta1**t)
    second_hat = second / (1 - cfg.beta2**t)
    direction = first_hat / (np.sqrt(second_hat) + cfg.eps)
    return direction, OptimState(first.size, t, first, second)


def step_array(
    cfg: OptimConfig, state: OptimState, p: np.ndarray, g: np.ndarray
) -> tuple[np.ndarray, OptimState]:
    """opt_step on bare arrays; used for parameter groups that are not networks."""
    p = np.asarray(p, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if p.shape != g.shape or p.shape != state.first_moment.shape:
        raise DomainError(
            f"layouts disagree: params {p.shape}, grad {g.shape}, state {state.first_moment.shape}"
        )
    if not np.all(np.isfinite(g)):
        raise NumericError("non-finite gradient entries", step=state.step_count + 1)

    gamma = cfg.weight_decay
    if cfg.kind == OptimizerKind.SGD:
        updated = p - cfg.lr * (g + gamma * p)
        return updated, OptimState(p.size, state.step_count + 1, state.first_moment, state.second_moment)
    if cfg.kind == OptimizerKind.ADAM:
        direction, new_state = _adam_direction(cfg, state, g + gamma * p)
        return p - cfg.lr * direction, new_state
    # decoupled decay, applied as a multiplicative shrink before the Adam move
    direction, new_state = _adam_direction(cfg, state, g)
    return p * (1 - cfg.lr * gamma) - cfg.lr * direction, new_state


def opt_step(
    cfg: OptimConfig, state: OptimState, p: ParamVector, g: ParamVector
) -> tuple[ParamVector, OptimState]:
    """
    One optimizer step.

    sgd:   p <- p - lr (g + gamma p)
    adam:  bias-corrected Adam on g + gamma p (coupled decay)
    adamw: p <- p - lr (adam(g) + gamma p) (decoupled decay)
    """
    if p.layout != g.layout:
        raise DomainError(f"parameter layout {p.layout} differs from gradient layout {g.layout}")
    values, new_state = step_array(cfg, state, p.values, g.values)
    return p.like(values), new_state


def project_norm(p: ParamVector, target: float) -> ParamVector:
    """Rescale p onto the sphere of radius `target`; the direction is unchanged."""
    if not target > 0:
        raise DomainError(f"target norm must be positive, got {target}")
    norm = weight_norm(p)
    if norm == 0.0:
        raise DomainError("cannot project the zero vector onto a sphere")
    return p.like(p.values * (target / norm))


def decay_norm_prediction(w0: float, gamma: float, t: float) -> float:
    """w0 exp(-gamma t): the norm predicted by pure weight decay."""
    if not w0 > 0:
        raise DomainError(f"w0 must be positive, got {w0}")
    if gamma < 0 or t < 0:
        raise DomainError(f"gamma and t must be non-negative, got gamma={gamma}, t={t}")
    return w0 * math.exp(-gamma * t)
