"""
Constrained minimisation of the training loss over weight directions at a
fixed weight norm.

Each optimizer step is followed by a rescale back onto the sphere; the
converged point stands in for the global minimum on that sphere.
"""

import logging

import numpy as np

from app.core.exceptions import DomainError, NumericError
from app.pydantic_models.landscape import CellConvergence, SphereMinConfig
from app.pydantic_models.network import MLPSpec
from app.services.network.mlp import loss_grad
from app.services.network.params import ParamVector, init_params, scale_params
from app.services.optim.optimizers import OptimState, opt_step, project_norm
from app.services.tasks.base import Task, TaskMetrics

logger = logging.getLogger(__name__)


class SphereMinResult:
    """Best direction found on the sphere of radius w, with its metrics."""

    def __init__(
        self,
        w: float,
        params: ParamVector | None,
        metrics: TaskMetrics | None,
        convergence: CellConvergence,
    ):
        self.w = w
        self.params = params
        self.metrics = metrics
        self.convergence = convergence

    @property
    def failed(self) -> bool:
        return self.convergence.failed

    @property
    def direction(self) -> np.ndarray | None:
        return None if self.params is None else self.params.direction

    @property
    def train_loss(self) -> float | None:
        return None if self.metrics is None else self.metrics.train_loss

    @property
    def test_loss(self) -> float | None:
        return None if self.metrics is None else self.metrics.test_loss

    @property
    def train_err(self) -> float | None:
        return None if self.metrics is None else self.metrics.train_err

    @property
    def test_err(self) -> float | None:
        return None if self.metrics is None else self.metrics.test_err

    def __repr__(self) -> str:
        if self.failed:
            return f"SphereMinResult(w={self.w:.4g}, failed at step {self.convergence.failure_step})"
        return f"SphereMinResult(w={self.w:.4g}, train_loss={self.train_loss:.4g}, test_loss={self.test_loss:.4g})"


def standard_norm(spec: MLPSpec, seed: int) -> float:
    """w0: norm of the standard draw for this spec and seed."""
    return init_params(spec, seed).norm


def _convergence_slope(losses: list[float], window: int) -> float | None:
    """Change of the moving-average loss per step over the last two windows."""
    if len(losses) < 2 * window:
        return None
    recent = float(np.mean(losses[-window:]))
    previous = float(np.mean(losses[-2 * window : -window]))
    return (recent - previous) / window


def _minimize_once(task: Task, spec: MLPSpec, w: float, cfg: SphereMinConfig, seed: int, restart: int) -> SphereMinResult:
    start = init_params(spec, seed)
    params = project_norm(scale_params(start, w / start.norm), w)
    state = OptimState.for_params(params)
    optim = cfg.optim_config()
    rng = np.random.default_rng(seed)
    losses: list[float] = []
    max_norm_error = 0.0

    for step in range(1, cfg.steps + 1):
        batch = task.train
        if cfg.batch_size and cfg.batch_size < len(task.train):
            batch = task.train.take(rng.choice(len(task.train), size=cfg.batch_size, replace=False))
        loss, grad = loss_grad(spec, params, batch)
        if not np.isfinite(loss):
            return _failure(w, step, restart, max_norm_error, "non-finite loss")
        losses.append(loss)
        try:
            params, state = opt_step(optim, state, params, grad)
        except NumericError as exc:
            return _failure(w, exc.step, restart, max_norm_error, str(exc))
        params = project_norm(params, w)
        if step % cfg.check_every == 0:
            max_norm_error = max(max_norm_error, abs(params.norm - w) / w)

    metrics = task.evaluate(spec, params)
    if not all(np.isfinite(value) for value in metrics.as_dict().values()):
        return _failure(w, cfg.steps, restart, max_norm_error, "non-finite final metrics")
    convergence = CellConvergence(
        final_train_loss=losses[-1],
        slope=_convergence_slope(losses, cfg.slope_window),
        max_norm_error=max_norm_error,
        restart=restart,
    )
    return SphereMinResult(w, params, metrics, convergence)


def _failure(w: float, step: int, restart: int, max_norm_error: float, reason: str) -> SphereMinResult:
    logger.warning(f"Sphere minimisation at w={w:.4g} failed at step {step}: {reason}")
    convergence = CellConvergence(
        max_norm_error=max_norm_error, restart=restart, failed=True, failure_step=step
    )
    return SphereMinResult(w, None, None, convergence)


def minimize_on_sphere(task: Task, spec: MLPSpec, w: float, cfg: SphereMinConfig) -> SphereMinResult:
    """
    Minimise the training loss (no weight decay) over directions with
    ||params|| = w, starting from the standard draw scaled by w / w0.

    Restart r starts from seed cfg.seed + r; the restart with the lowest
    final train loss is kept. A failed restart never wins over a finished one.
    """
    if not w > 0:
        raise DomainError(f"target norm w must be positive, got {w}")
    best: SphereMinResult | None = None
    for restart in range(cfg.restarts):
        result = _minimize_once(task, spec, w, cfg, cfg.seed + restart, restart)
        if best is None or (best.failed and not result.failed):
            best = result
        elif not result.failed and result.train_loss < best.train_loss:
            best = result
    assert best is not None
    if not best.failed:
        logger.debug(
            f"Sphere w={w:.4g}: train {best.train_loss:.4g} test {best.test_loss:.4g} "
            f"(restart {best.convergence.restart})"
        )
    return best
