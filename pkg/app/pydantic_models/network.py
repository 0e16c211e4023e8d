"""
Pydantic models for network architectures and optimizer settings.
"""

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.utils.constants import Activation, LossKind, OptimizerKind


class MLPSpec(BaseModel):
    """Architecture of a dense multilayer perceptron."""

    model_config = ConfigDict(frozen=True)

    layer_widths: list[int] = Field(
        ...,
        min_length=2,
        description="Widths from input to output, e.g. [5, 100, 100, 5]",
        examples=[[5, 100, 100, 5]],
    )
    activation: Activation = Field(
        Activation.TANH, description="Activation of every hidden layer"
    )
    loss: LossKind = Field(LossKind.MSE, description="Training loss")

    @field_validator("layer_widths")
    @classmethod
    def widths_positive(cls, value: list[int]) -> list[int]:
        if any(width < 1 for width in value):
            raise ValueError(f"all layer widths must be >= 1, got {value}")
        return value

    @property
    def input_width(self) -> int:
        return self.layer_widths[0]

    @property
    def output_width(self) -> int:
        return self.layer_widths[-1]

    @property
    def layer_shapes(self) -> list[tuple[int, int]]:
        """(fan_in, fan_out) of every affine layer."""
        return list(zip(self.layer_widths[:-1], self.layer_widths[1:]))

    @property
    def param_count(self) -> int:
        return sum(rows * cols + cols for rows, cols in self.layer_shapes)


class OptimConfig(BaseModel):
    """Optimizer hyperparameters; weight_decay is the gamma of the norm-decay law."""

    kind: OptimizerKind = Field(OptimizerKind.ADAM, description="sgd, adam or adamw")
    lr: float = Field(1e-3, gt=0, description="Learning rate")
    beta1: float = Field(0.9, ge=0, lt=1)
    beta2: float = Field(0.999, ge=0, lt=1)
    eps: float = Field(1e-8, gt=0)
    weight_decay: float = Field(0.0, ge=0, description="Weight decay gamma")
