"""
Reduced 1D curves over alpha and their regularised variant.
"""

import logging
import math

from app.core.exceptions import DomainError
from app.pydantic_models.landscape import CurvePoint, ReducedCurve, SphereMinConfig
from app.pydantic_models.network import MLPSpec
from app.services.tasks.base import Task

from .cells import CellJob, SingleTaskFamily, run_cells
from .sphere import standard_norm

logger = logging.getLogger(__name__)


def check_ascending(values: list[float], what: str) -> None:
    if not values:
        raise DomainError(f"{what} must not be empty")
    if any(not value > 0 for value in values):
        raise DomainError(f"{what} must be positive, got {values}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise DomainError(f"{what} must be strictly ascending, got {values}")


def reduced_curve_1d(task: Task, spec: MLPSpec, alpha_values: list[float], cfg: SphereMinConfig) -> ReducedCurve:
    """
    One constrained minimisation per alpha at w = alpha * w0.

    w0 is the norm of the standard draw with seed cfg.seed and is recorded
    on the curve.
    """
    alpha_values = [float(alpha) for alpha in alpha_values]
    check_ascending(alpha_values, "alpha values")
    w0 = standard_norm(spec, cfg.seed)
    jobs = [CellJob(row, 0, alpha * w0) for row, alpha in enumerate(alpha_values)]
    results = run_cells(SingleTaskFamily(task), spec, cfg, jobs)

    points = []
    for row, alpha in enumerate(alpha_values):
        result = results[(row, 0)]
        points.append(
            CurvePoint(
                alpha=alpha,
                w=alpha * w0,
                train_loss=result.train_loss,
                test_loss=result.test_loss,
                train_err=result.train_err,
                test_err=result.test_err,
                convergence=result.convergence,
            )
        )
    failed = sum(point.failed for point in points)
    if failed:
        logger.warning(f"{failed} of {len(points)} curve points failed")
    meta = {"task": task.describe(), "cfg": cfg.model_dump(mode="json"), "seed": cfg.seed}
    return ReducedCurve(w0=w0, param_count=spec.param_count, spec=spec, points=points, meta=meta)


def default_magnitude(curve: ReducedCurve) -> float:
    """C = w0 / sqrt(P): root-mean-square magnitude of a standard-draw parameter."""
    return curve.w0 / math.sqrt(curve.param_count)


def regularized_train_landscape(curve: ReducedCurve, gamma: float, C: float | None = None) -> ReducedCurve:
    """
    Add gamma * alpha^2 * C^2 to every train loss.

    Returns a new curve; the input curve is left untouched.
    """
    if gamma < 0:
        raise DomainError(f"gamma must be non-negative, got {gamma}")
    C = default_magnitude(curve) if C is None else C
    if not C > 0:
        raise DomainError(f"C must be positive, got {C}")
    regularized = curve.model_copy(deep=True)
    for point in regularized.points:
        if point.train_loss is not None:
            point.train_loss = point.train_loss + gamma * point.alpha**2 * C**2
    regularized.meta = {**regularized.meta, "regularization": {"gamma": gamma, "C": C}}
    return regularized
