"""
Pydantic models for reduced loss landscapes.
"""

from typing import Any

from pydantic import BaseModel, Field, model_validator

from app.pydantic_models.network import MLPSpec, OptimConfig
from app.utils.constants import AxisKind, OptimizerKind


class SphereMinConfig(BaseModel):
    """Settings of the constrained minimisation over directions at fixed norm."""

    steps: int = Field(10_000, ge=1, description="Optimizer steps per restart")
    lr: float = Field(1e-3, gt=0, description="Learning rate of the inner optimizer")
    optimizer: OptimizerKind = Field(OptimizerKind.ADAM, description="Inner optimizer, no weight decay")
    seed: int = Field(0, description="Seed of the standard draw the search starts from")
    restarts: int = Field(1, ge=1, description="Independent restarts; the lowest train loss wins")
    check_every: int = Field(100, ge=1, description="Spot-check interval of the norm constraint")
    slope_window: int = Field(100, ge=2, description="Window of the convergence slope estimate")
    batch_size: int = Field(0, ge=0, description="0 means full batch")
    workers: int = Field(1, ge=1, description="Process-pool size for curves and grids")

    def optim_config(self) -> OptimConfig:
        """Weight decay is excluded from the minimised objective."""
        return OptimConfig(kind=self.optimizer, lr=self.lr, weight_decay=0.0)


class CellConvergence(BaseModel):
    """What happened inside one constrained minimisation."""

    final_train_loss: float | None = Field(None, description="Last minibatch/full-batch train loss")
    slope: float | None = Field(None, description="Per-step slope of the moving-average train loss")
    max_norm_error: float = Field(0.0, ge=0, description="Largest |norm - w| / w at spot checks")
    restart: int = Field(0, ge=0, description="Restart that produced the kept result")
    failed: bool = False
    failure_step: int | None = None


class CurvePoint(BaseModel):
    """One alpha of a reduced 1D curve."""

    alpha: float = Field(..., gt=0)
    w: float = Field(..., gt=0)
    train_loss: float | None = None
    test_loss: float | None = None
    train_err: float | None = None
    test_err: float | None = None
    convergence: CellConvergence = Field(default_factory=CellConvergence)

    @property
    def failed(self) -> bool:
        return self.convergence.failed or self.train_loss is None


class ReducedCurve(BaseModel):
    """Reduced train/test losses against alpha = w / w0."""

    w0: float = Field(..., gt=0, description="Norm of the standard draw alpha is relative to")
    param_count: int = Field(..., ge=1)
    spec: MLPSpec
    points: list[CurvePoint]
    meta: dict[str, Any] = Field(default_factory=dict)

    @property
    def alphas(self) -> list[float]:
        return [point.alpha for point in self.points]

    def valid_points(self) -> list[CurvePoint]:
        return [point for point in self.points if not point.failed]


class ShapeMetrics(BaseModel):
    """L/U diagnostics of a reduced curve."""

    argmin_alpha: float
    is_L: bool
    is_U: bool
    mismatch_region: tuple[float, float] | None = None
    tau_L: float
    tau_U: float
    tau_M: float


class SecondAxis(BaseModel):
    kind: AxisKind
    values: list[float] = Field(..., min_length=1)


class LandscapeGrid(BaseModel):
    """
    Reduced losses and errors over (w, second axis).

    Matrices are indexed [w index][second-axis index]; failed cells hold
    None and are flagged in `failed`.
    """

    meta: dict[str, Any] = Field(default_factory=dict)
    w_axis: list[float] = Field(..., min_length=1)
    second_axis: SecondAxis
    train_loss: list[list[float | None]]
    test_loss: list[list[float | None]]
    train_err: list[list[float | None]]
    test_err: list[list[float | None]]
    failed: list[list[bool]]
    convergence: list[list[CellConvergence]] | None = None

    @model_validator(mode="after")
    def shapes_match_axes(self) -> "LandscapeGrid":
        rows, cols = len(self.w_axis), len(self.second_axis.values)
        for name in ("train_loss", "test_loss", "train_err", "test_err", "failed"):
            matrix = getattr(self, name)
            if len(matrix) != rows or any(len(row) != cols for row in matrix):
                raise ValueError(f"{name} must be a {rows} x {cols} matrix")
        for name in ("train_loss", "test_loss"):
            for row in getattr(self, name):
                for value in row:
                    if value is not None and not value >= 0:
                        raise ValueError(f"{name} holds a negative or non-finite value {value}")
        return self

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.w_axis), len(self.second_axis.values)

    @property
    def any_failed(self) -> bool:
        return any(any(row) for row in self.failed)
