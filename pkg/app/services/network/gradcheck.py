"""
Central finite-difference check of the analytic gradient.
"""

import logging

import numpy as np

from app.pydantic_models.network import MLPSpec
from app.utils.constants import LossKind

from .batch import Batch
from .losses import loss_value
from .mlp import forward, loss_grad
from .params import ParamVector

logger = logging.getLogger(__name__)


def finite_difference(
    spec: MLPSpec,
    p: ParamVector,
    batch: Batch,
    kind: LossKind | None,
    coords: np.ndarray,
    h: float = 1e-5,
) -> np.ndarray:
    """Centered-difference estimate of dloss/dp at the given coordinates."""
    kind = LossKind.parse(kind or spec.loss)
    estimates = np.zeros(len(coords))
    x = p.values.copy()
    for slot, j in enumerate(coords):
        original = x[j]
        x[j] = original + h
        f_plus = loss_value(forward(spec, p.like(x), batch.inputs), batch, kind)
        x[j] = original - h
        f_minus = loss_value(forward(spec, p.like(x), batch.inputs), batch, kind)
        x[j] = original
        estimates[slot] = (f_plus - f_minus) / (2 * h)
    return estimates


def check_gradient(
    spec: MLPSpec,
    p: ParamVector,
    batch: Batch,
    kind: LossKind | None = None,
    n_coords: int = 50,
    h: float = 1e-5,
    seed: int = 0,
) -> float:
    """
    Max relative error between analytic and finite-difference gradients on
    `n_coords` randomly sampled coordinates.

    The relative error of one coordinate is |a - f| / max(|a|, |f|, 1e-8).
    """
    rng = np.random.default_rng(seed)
    coords = rng.choice(p.size, size=min(n_coords, p.size), replace=False)
    _, grad = loss_grad(spec, p, batch, kind)
    analytic = grad.values[coords]
    numeric = finite_difference(spec, p, batch, kind, coords, h)
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    error = float(np.max(np.abs(analytic - numeric) / scale))
    logger.info(f"Gradient check on {len(coords)} coordinates: max relative error {error:.3e}")
    return error
