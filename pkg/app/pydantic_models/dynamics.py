"""
Pydantic models for reduced (w, m) dynamics and grokking-time estimates.
"""

from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from app.utils.constants import DEFAULT_DT, DT_DECAY_PER_STEP, TrajectoryStatus


class DynamicsConfig(BaseModel):
    """Explicit Euler settings for the reduced gradient flow."""

    eta_d: float = Field(1.0, gt=0, description="Decoder learning rate, drives w")
    eta_r: float = Field(1.0, gt=0, description="Representation learning rate, drives m")
    gamma: float = Field(0.01, ge=0, description="Weight decay")
    dt: float | None = Field(
        None, gt=0, description="Euler step size; unset means DT_DECAY_PER_STEP / (eta_d * gamma)"
    )
    max_steps: int = Field(100_000, ge=1)
    record_every: int = Field(10, ge=1, description="Keep every k-th sample (the last is always kept)")
    target_m: float | None = Field(
        None, description="Stop with reached_target once m drops to this value"
    )

    @model_validator(mode="after")
    def default_step_size(self) -> "DynamicsConfig":
        if self.dt is None:
            self.dt = DT_DECAY_PER_STEP / (self.eta_d * self.gamma) if self.gamma > 0 else DEFAULT_DT
        return self


class TrajectorySample(BaseModel):
    t: float = Field(..., ge=0)
    w: float = Field(..., gt=0)
    m: float
    train_loss: float
    test_loss: float | None = None


class ReducedTrajectory(BaseModel):
    """Samples of one integration plus how it ended."""

    samples: list[TrajectorySample] = Field(..., min_length=1)
    status: TrajectoryStatus
    meta: dict[str, Any] = Field(default_factory=dict)

    @field_validator("samples")
    @classmethod
    def times_strictly_increase(cls, samples: list[TrajectorySample]) -> list[TrajectorySample]:
        for earlier, later in zip(samples, samples[1:]):
            if not later.t > earlier.t:
                raise ValueError(f"sample times must strictly increase, got {earlier.t} then {later.t}")
        return samples

    @property
    def final(self) -> TrajectorySample:
        return self.samples[-1]

    def column(self, name: str) -> list[float | None]:
        return [getattr(sample, name) for sample in self.samples]


class GrokTimeEstimate(BaseModel):
    """Closed-form time to generalise; infinite when nothing drives w down."""

    time: float
    generalizes: bool = Field(..., description="False when gamma = 0 and the time is infinite")


class BoundaryContour(BaseModel):
    """Level set of the train loss on one (w, m) grid with its fitted slope."""

    n_train: int
    level: float
    points: list[tuple[float, float]] = Field(..., description="(m, w) crossings of the level set")
    slope: float = Field(..., description="d(log w)/dm of the fitted line")
    angle: float = Field(..., ge=0, description="atan(|slope|) in radians")
    min_m: float
    connects: bool = Field(..., description="Whether the contour reaches the small-m region")
