"""
Independent sphere-minimisation jobs, run serially or on a process pool.

Every cell is a pure function of (family, spec, cfg, w, axis value), so the
assembled result does not depend on the order cells finish in.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import NamedTuple

from app.pydantic_models.landscape import SphereMinConfig
from app.pydantic_models.network import MLPSpec
from app.services.tasks.base import Task
from app.services.tasks.families import TaskFamily

from .sphere import SphereMinResult, minimize_on_sphere

logger = logging.getLogger(__name__)


class CellJob(NamedTuple):
    row: int
    col: int
    w: float
    value: float | None = None


class SingleTaskFamily(TaskFamily):
    """A family with one member, for 1D curves."""

    def __init__(self, task: Task):
        self.task = task

    def build(self, value: float | None) -> Task:
        return self.task


class CellSolver:
    """Solves cells against one task family, keeping the last built task."""

    def __init__(self, family: TaskFamily, spec: MLPSpec, cfg: SphereMinConfig):
        self.family = family
        self.spec = spec
        self.cfg = cfg
        self._cached: tuple[float | None, Task] | None = None

    def task(self, value: float | None) -> Task:
        if self._cached is None or self._cached[0] != value:
            self._cached = (value, self.family.build(value))
        return self._cached[1]

    def solve(self, job: CellJob) -> tuple[CellJob, SphereMinResult]:
        result = minimize_on_sphere(self.task(job.value), self.spec, job.w, self.cfg)
        # only metrics travel back from worker processes
        result.params = None
        return job, result


_solver: CellSolver | None = None


def _init_worker(family: TaskFamily, spec: MLPSpec, cfg: SphereMinConfig) -> None:
    global _solver
    _solver = CellSolver(family, spec, cfg)


def _solve_in_worker(job: CellJob) -> tuple[CellJob, SphereMinResult]:
    assert _solver is not None
    return _solver.solve(job)


def run_cells(
    family: TaskFamily, spec: MLPSpec, cfg: SphereMinConfig, jobs: list[CellJob]
) -> dict[tuple[int, int], SphereMinResult]:
    """
    Solve all jobs and return results keyed by (row, col).

    Uses cfg.workers processes when more than one is configured.
    """
    results: dict[tuple[int, int], SphereMinResult] = {}
    if cfg.workers <= 1 or len(jobs) <= 1:
        solver = CellSolver(family, spec, cfg)
        for done, job in enumerate(jobs, start=1):
            _, result = solver.solve(job)
            results[(job.row, job.col)] = result
            logger.debug(f"Cell {done}/{len(jobs)} (w={job.w:.4g}, value={job.value}) done")
        return results

    logger.info(f"Solving {len(jobs)} cells on {cfg.workers} worker processes")
    with ProcessPoolExecutor(
        max_workers=cfg.workers, initializer=_init_worker, initargs=(family, spec, cfg)
    ) as executor:
        futures = [executor.submit(_solve_in_worker, job) for job in jobs]
        for done, future in enumerate(as_completed(futures), start=1):
            job, result = future.result()
            results[(job.row, job.col)] = result
            if done % 10 == 0 or done == len(jobs):
                logger.info(f"Cells solved: {done}/{len(jobs)}")
    return results
