"""
Pydantic models for training runs, their records and sweeps.
"""

from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from app.pydantic_models.network import OptimConfig
from app.utils.constants import LossKind, Metric, OptimizerKind, RunStatus, SweepParam, TaskKind


class ExperimentConfig(BaseModel):
    """
    Everything a single training run depends on.

    Unset task parameters fall back to the task constructors' defaults.
    """

    task: TaskKind = Field(..., description="teacher_student, addition or mnist", examples=["teacher_student"])
    seed: int = Field(0, description="Seeds the task, the init draw and minibatch sampling")
    alpha: float = Field(1.0, gt=0, description="Init scale relative to the standard draw")
    optimizer: OptimizerKind = OptimizerKind.ADAM
    lr: float = Field(1e-3, gt=0)
    weight_decay: float = Field(0.0, ge=0, description="Weight decay gamma")
    steps: int = Field(100_000, ge=0)
    batch_size: int = Field(0, ge=0, description="0 means full batch")
    log_every: int = Field(10, ge=1, description="Logging interval up to step 100, geometric after")

    constrained: bool = Field(False, description="Pin the weight norm at alpha * w0 every step")
    constrained_norm: float | None = Field(
        None, gt=0, description="Pin the weight norm at this absolute value instead"
    )

    loss: LossKind | None = Field(None, description="Override of the task's default loss")
    widths: list[int] | None = Field(None, min_length=2, description="Override of the layer widths")
    theta: float = Field(0.01, gt=0, description="Regression accuracy threshold")

    # teacher-student and mnist
    n_train: int | None = Field(None, ge=1)
    n_test: int = Field(100, ge=1)

    # addition
    p: int = Field(10, ge=1)
    messiness: float = Field(1.0, ge=0, le=1)
    eta_r: float | None = Field(None, gt=0, description="Representation learning rate; defaults to lr")
    train_representation: bool = Field(True, description="Train the addition representation too")

    # mnist
    mnist_dir: str | None = None
    test_subset: int = Field(2000, ge=1, description="Size of the fixed MNIST test subset")

    @field_validator("task", mode="before")
    @classmethod
    def parse_task(cls, value: Any) -> TaskKind:
        return TaskKind.parse(value)

    @field_validator("loss", mode="before")
    @classmethod
    def parse_loss(cls, value: Any) -> LossKind | None:
        return None if value is None else LossKind.parse(value)

    @property
    def is_constrained(self) -> bool:
        return self.constrained or self.constrained_norm is not None

    def target_norm(self, w0: float) -> float | None:
        """Norm the run is pinned at, or None when unconstrained."""
        if self.constrained_norm is not None:
            return self.constrained_norm
        return self.alpha * w0 if self.constrained else None

    def optim_config(self) -> OptimConfig:
        """A pinned norm makes weight decay meaningless, so it is switched off."""
        gamma = 0.0 if self.is_constrained else self.weight_decay
        return OptimConfig(kind=self.optimizer, lr=self.lr, weight_decay=gamma)

    def representation_optim_config(self) -> OptimConfig:
        return OptimConfig(kind=self.optimizer, lr=self.eta_r or self.lr, weight_decay=0.0)


class RecordRow(BaseModel):
    step: int = Field(..., ge=0)
    train_loss: float
    test_loss: float
    train_acc: float
    test_acc: float
    weight_norm: float = Field(..., gt=0)


class RunRecords(BaseModel):
    """Logged metrics of one run, with the config that produced them."""

    rows: list[RecordRow]
    config: ExperimentConfig | None = None
    status: RunStatus = RunStatus.COMPLETED
    wall_time: float = Field(0.0, ge=0, description="Seconds spent in the run")
    meta: dict[str, Any] = Field(default_factory=dict)

    @field_validator("rows")
    @classmethod
    def steps_strictly_increase(cls, rows: list[RecordRow]) -> list[RecordRow]:
        for earlier, later in zip(rows, rows[1:]):
            if later.step <= earlier.step:
                raise ValueError(f"steps must strictly increase, got {earlier.step} then {later.step}")
        return rows

    @property
    def steps(self) -> list[int]:
        return [row.step for row in self.rows]

    def column(self, metric: Metric | str) -> list[float]:
        name = metric.value if isinstance(metric, Metric) else metric
        return [getattr(row, name) for row in self.rows]

    @property
    def final(self) -> RecordRow:
        return self.rows[-1]


class SweepOutcome(BaseModel):
    value: float
    time: int | None = Field(None, description="First logged step reaching the level")
    status: RunStatus = RunStatus.COMPLETED
    records: RunRecords | None = Field(None, exclude=True)


class PowerLawFit(BaseModel):
    """log t = intercept + slope * log value, by least squares."""

    slope: float
    intercept: float
    residual: float = Field(..., ge=0, description="Root-mean-square residual in log space")
    n_points: int = Field(..., ge=2)


class SweepResult(BaseModel):
    param: SweepParam
    values: list[float]
    metric: Metric
    level: float
    outcomes: list[SweepOutcome]
    fit: PowerLawFit | None = None
    fit_omitted_reason: str | None = None

    @model_validator(mode="after")
    def fit_or_reason(self) -> "SweepResult":
        if self.fit is None and not self.fit_omitted_reason:
            raise ValueError("a sweep without a fit must say why")
        return self

    @property
    def times(self) -> list[int | None]:
        return [outcome.time for outcome in self.outcomes]


class DegrokResult(BaseModel):
    """Paired addition runs: free norm with decay versus pinned small norm."""

    unconstrained: RunRecords
    constrained: RunRecords
