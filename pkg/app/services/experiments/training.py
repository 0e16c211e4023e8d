"""
Full training runs with periodic metric logging.
"""

import logging
import time

import numpy as np

from app.core.exceptions import NumericError
from app.pydantic_models.experiment import ExperimentConfig, RecordRow, RunRecords
from app.services.network.mlp import loss_and_grads
from app.services.network.params import ParamVector, init_params, scale_params
from app.services.optim.optimizers import OptimState, opt_step, step_array
from app.services.tasks.addition import AdditionTask
from app.services.tasks.base import Task
from app.utils.constants import RunStatus

from .build import build_task
from .schedule import logging_steps

logger = logging.getLogger(__name__)


def joint_norm(params: ParamVector, representation: np.ndarray | None = None) -> float:
    """L2 norm of every trainable parameter, representation included."""
    if representation is None:
        return params.norm
    return float(np.sqrt(params.norm**2 + np.dot(representation, representation)))


def _project(
    params: ParamVector, representation: np.ndarray | None, target: float
) -> tuple[ParamVector, np.ndarray | None]:
    factor = target / joint_norm(params, representation)
    params = params.like(params.values * factor)
    return params, None if representation is None else representation * factor


class TrainingRun:
    """
    State of one run: decoder parameters, an optional trainable addition
    representation, their optimizer states and the logged rows.
    """

    def __init__(self, config: ExperimentConfig, task: Task):
        self.config = config
        self.task = task
        self.spec = task.spec(loss=config.loss, widths=config.widths)
        standard = init_params(self.spec, config.seed)
        self.params = scale_params(standard, config.alpha)
        self.representation = None
        if isinstance(task, AdditionTask) and config.train_representation:
            self.representation = task.representation.copy()
        self.w0 = joint_norm(standard, self.representation)
        self.target_norm = config.target_norm(self.w0)
        if self.target_norm is not None:
            self.params, self.representation = _project(self.params, self.representation, self.target_norm)

        self.optim = config.optim_config()
        self.state = OptimState.for_params(self.params)
        self.rep_optim = config.representation_optim_config()
        self.rep_state = None if self.representation is None else OptimState(self.representation.size)
        self.rng = np.random.default_rng([config.seed, 3])
        self.rows: list[RecordRow] = []

    @property
    def current_task(self) -> Task:
        if self.representation is None:
            return self.task
        return self.task.with_representation(self.representation)

    def _minibatch(self) -> np.ndarray | None:
        n = len(self.task.train)
        if not self.config.batch_size or self.config.batch_size >= n:
            return None
        return self.rng.choice(n, size=self.config.batch_size, replace=False)

    def record(self, step: int) -> RecordRow:
        metrics = self.current_task.evaluate(self.spec, self.params).as_dict()
        if not all(np.isfinite(value) for value in metrics.values()):
            raise NumericError("non-finite evaluation metrics", step)
        row = RecordRow(step=step, weight_norm=joint_norm(self.params, self.representation), **metrics)
        self.rows.append(row)
        logger.debug(
            f"step {step}: train {row.train_loss:.4g}/{row.train_acc:.3f} "
            f"test {row.test_loss:.4g}/{row.test_acc:.3f} norm {row.weight_norm:.4g}"
        )
        return row

    def step(self, step: int) -> None:
        picked = self._minibatch()
        if self.representation is None:
            batch = self.task.train if picked is None else self.task.train.take(picked)
            result = loss_and_grads(self.spec, self.params, batch)
        else:
            indices = self.task.train_indices if picked is None else self.task.train_indices[picked]
            batch = self.task.batch(indices, self.representation)
            result = loss_and_grads(self.spec, self.params, batch, input_grad=True)
        if not np.isfinite(result.loss):
            raise NumericError("non-finite training loss", step)

        self.params, self.state = opt_step(self.optim, self.state, self.params, result.grad)
        if self.representation is not None:
            rep_grad = self.task.representation_grad(indices, result.input_grad)
            self.representation, self.rep_state = step_array(
                self.rep_optim, self.rep_state, self.representation, rep_grad
            )
        if self.target_norm is not None:
            self.params, self.representation = _project(self.params, self.representation, self.target_norm)


def run_training(config: ExperimentConfig, task: Task | None = None) -> RunRecords:
    """
    Train from the alpha-scaled standard draw and log metrics.

    Metrics are logged at step 0, every log_every steps up to step 100,
    geometrically after and at the final step. A non-finite loss ends the
    run with status diverged and the rows logged so far.

    Args:
        config: Run configuration.
        task: Prebuilt task; built from the config when omitted.

    Returns:
        RunRecords echoing the config.
    """
    started = time.perf_counter()
    task = build_task(config) if task is None else task
    run = TrainingRun(config, task)
    log_at = set(logging_steps(config.steps, config.log_every))
    logger.info(
        f"Training {task.name} {run.spec.layer_widths}: alpha={config.alpha} "
        f"{config.optimizer.value} lr={config.lr} gamma={run.optim.weight_decay} "
        f"steps={config.steps} seed={config.seed}"
        + (f" norm pinned at {run.target_norm:.6g}" if run.target_norm is not None else "")
    )

    status = RunStatus.COMPLETED
    meta = {"w0": run.w0, "target_norm": run.target_norm, "task": task.describe()}
    try:
        run.record(0)
        for step in range(1, config.steps + 1):
            run.step(step)
            if step in log_at:
                run.record(step)
    except NumericError as exc:
        status = RunStatus.DIVERGED
        meta["diverged_step"] = exc.step
        logger.warning(f"Run diverged: {exc}; keeping {len(run.rows)} logged rows")

    wall_time = time.perf_counter() - started
    if run.rows:
        final = run.rows[-1]
        logger.info(
            f"Finished at step {final.step} in {wall_time:.1f}s: train acc {final.train_acc:.3f}, "
            f"test acc {final.test_acc:.3f}, norm {final.weight_norm:.4g}"
        )
    return RunRecords(rows=run.rows, config=config, status=status, wall_time=wall_time, meta=meta)
