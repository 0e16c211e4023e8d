"""
Explicit Euler integration of the reduced gradient flow on a (w, m) grid:

    dw/dt = -eta_d (dL/dw + gamma w)
    dm/dt = -eta_r dL/dm
"""

import logging
import math

from app.core.exceptions import OutOfBoundsError
from app.pydantic_models.dynamics import DynamicsConfig, ReducedTrajectory, TrajectorySample
from app.pydantic_models.landscape import LandscapeGrid
from app.utils.constants import REDUCED_TRAJECTORY_ASSUMPTIONS, TrajectoryStatus

from .interpolate import LandscapeInterpolant

logger = logging.getLogger(__name__)


def integrate_reduced(grid: LandscapeGrid, start: tuple[float, float], cfg: DynamicsConfig) -> ReducedTrajectory:
    """
    Follow the reduced flow from start = (w0, m0).

    Samples are kept every cfg.record_every steps plus the first and last.
    Leaving the hull ends the run with status left_grid and the samples
    gathered so far. Running into a failed cell, where the interpolant is
    NaN, ends it the same way with status nan_cell.
    """
    train = LandscapeInterpolant(grid, "train_loss")
    test = LandscapeInterpolant(grid, "test_loss")
    w, m = float(start[0]), float(start[1])
    if not train.contains(w, m):
        raise OutOfBoundsError((w, m), train.bounds)

    def sample(t: float, w: float, m: float) -> TrajectorySample:
        test_loss = test.value(w, m)
        return TrajectorySample(
            t=t,
            w=w,
            m=m,
            train_loss=train.value(w, m),
            test_loss=None if math.isnan(test_loss) else test_loss,
        )

    samples = [sample(0.0, w, m)]
    status = TrajectoryStatus.MAX_STEPS
    recorded_step = 0
    for step in range(1, cfg.max_steps + 1):
        _, grad_w, grad_m = train.value_and_grad(w, m)
        if not (math.isfinite(grad_w) and math.isfinite(grad_m)):
            status = TrajectoryStatus.NAN_CELL
            logger.warning(f"Trajectory reached a failed grid cell at step {step}, (w, m)=({w:.4g}, {m:.4g})")
            break
        next_w = w - cfg.dt * cfg.eta_d * (grad_w + cfg.gamma * w)
        next_m = m - cfg.dt * cfg.eta_r * grad_m
        if not train.contains(next_w, next_m):
            status = TrajectoryStatus.LEFT_GRID
            logger.info(f"Trajectory left the grid at step {step} heading to ({next_w:.4g}, {next_m:.4g})")
            break
        w, m = next_w, next_m
        if cfg.target_m is not None and m <= cfg.target_m:
            status = TrajectoryStatus.REACHED_TARGET
            samples.append(sample(step * cfg.dt, w, m))
            recorded_step = step
            break
        if step % cfg.record_every == 0 or step == cfg.max_steps:
            samples.append(sample(step * cfg.dt, w, m))
            recorded_step = step

    # keep the last usable point when the run stopped between records
    if status in (TrajectoryStatus.LEFT_GRID, TrajectoryStatus.NAN_CELL) and recorded_step != step - 1:
        samples.append(sample((step - 1) * cfg.dt, w, m))

    logger.info(
        f"Reduced trajectory from ({start[0]:.4g}, {start[1]:.4g}) ended with {status.value} "
        f"at t={samples[-1].t:.4g}, (w, m)=({samples[-1].w:.4g}, {samples[-1].m:.4g})"
    )
    meta = {
        "start": [float(start[0]), float(start[1])],
        "cfg": cfg.model_dump(mode="json"),
        "assumptions": list(REDUCED_TRAJECTORY_ASSUMPTIONS),
        "grid": grid.meta.get("task", {}),
    }
    return ReducedTrajectory(samples=samples, status=status, meta=meta)
