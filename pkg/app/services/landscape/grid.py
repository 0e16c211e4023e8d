"""
Reduced landscapes over (w, N) and (w, m).
"""

import logging

import numpy as np

from app.core.exceptions import DomainError
from app.pydantic_models.landscape import LandscapeGrid, SecondAxis, SphereMinConfig
from app.pydantic_models.network import MLPSpec
from app.services.tasks.families import TaskFamily
from app.utils.constants import AxisKind

from .cells import CellJob, run_cells
from .curves import check_ascending
from .sphere import standard_norm

logger = logging.getLogger(__name__)


def log_w_axis(w_min: float, w_max: float, n: int) -> list[float]:
    """n norms evenly spaced in log w."""
    if not 0 < w_min < w_max:
        raise DomainError(f"need 0 < w_min < w_max, got {w_min}, {w_max}")
    if n < 2:
        raise DomainError(f"a log axis needs at least 2 points, got {n}")
    return [float(w) for w in np.geomspace(w_min, w_max, n)]


def reduced_grid(
    family: TaskFamily,
    spec: MLPSpec,
    w_values: list[float],
    second_values: list[float],
    cfg: SphereMinConfig,
) -> LandscapeGrid:
    """
    One constrained minimisation per (w, second-axis value) cell.

    The family rebuilds the task for every second-axis value with its own
    fixed seed; every cell starts from the standard draw of cfg.seed.
    Failed cells are flagged and hold None.
    """
    w_values = [float(w) for w in w_values]
    second_values = [float(value) for value in second_values]
    check_ascending(w_values, "w axis")
    if not second_values:
        raise DomainError("second axis must not be empty")
    if family.axis_kind == AxisKind.DATA_SIZE:
        check_ascending(second_values, "data-size axis")

    # column-major order so each worker rebuilds a column's task once
    jobs = [
        CellJob(row, col, w, value)
        for col, value in enumerate(second_values)
        for row, w in enumerate(w_values)
    ]
    logger.info(
        f"Reduced grid: {len(w_values)} w x {len(second_values)} {family.axis_kind.value} "
        f"= {len(jobs)} cells"
    )
    results = run_cells(family, spec, cfg, jobs)

    rows, cols = len(w_values), len(second_values)
    matrices = {name: [[None] * cols for _ in range(rows)] for name in ("train_loss", "test_loss", "train_err", "test_err")}
    failed = [[False] * cols for _ in range(rows)]
    convergence = [[None] * cols for _ in range(rows)]
    for (row, col), result in results.items():
        for name, matrix in matrices.items():
            matrix[row][col] = getattr(result, name)
        failed[row][col] = result.failed
        convergence[row][col] = result.convergence

    n_failed = sum(map(sum, failed))
    if n_failed:
        logger.warning(f"{n_failed} of {len(jobs)} grid cells failed; they are flagged and hold null")

    w0 = standard_norm(spec, cfg.seed)
    meta = {
        "task": family.describe(),
        "spec": spec.model_dump(mode="json"),
        "cfg": cfg.model_dump(mode="json"),
        "seeds": {"init": cfg.seed, "restarts": list(range(cfg.seed, cfg.seed + cfg.restarts))},
        "w0": w0,
        "alpha_axis": [w / w0 for w in w_values],
    }
    return LandscapeGrid(
        meta=meta,
        w_axis=w_values,
        second_axis=SecondAxis(kind=family.axis_kind, values=second_values),
        failed=failed,
        convergence=convergence,
        **matrices,
    )


def critical_data_size(grid: LandscapeGrid, tau: float) -> int | None:
    """
    Smallest N whose column reaches test error <= tau at some w.

    Failed cells never qualify.
    """
    if grid.second_axis.kind != AxisKind.DATA_SIZE:
        raise DomainError(f"critical data size needs an N axis, grid has {grid.second_axis.kind.value}")
    values = grid.second_axis.values
    if any(b <= a for a, b in zip(values, values[1:])):
        raise DomainError(f"N axis must be ascending, got {values}")
    for col, n in enumerate(values):
        column = [grid.test_err[row][col] for row in range(len(grid.w_axis))]
        if any(err is not None and err <= tau for err in column):
            return int(n)
    return None
