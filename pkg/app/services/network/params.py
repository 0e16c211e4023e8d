"""
Flat parameter vectors and their initialisation.

Layout: layer by layer, the weight matrix (fan_in x fan_out, row-major)
followed by the bias vector. Biases are part of the norm, of alpha-scaling
and of norm projection.
"""

import logging
import math

import numpy as np

from app.core.exceptions import DomainError
from app.pydantic_models.network import MLPSpec
from app.utils.constants import Activation

logger = logging.getLogger(__name__)


class ParamVector:
    """
    All trainable scalars of a network in one 64-bit vector.

    `layout` holds the (fan_in, fan_out) shape of every layer so the vector
    can be unpacked into weight/bias views without copying.
    """

    def __init__(self, values: np.ndarray, layout: list[tuple[int, int]]):
        values = np.asarray(values, dtype=np.float64)
        expected = sum(rows * cols + cols for rows, cols in layout)
        if values.ndim != 1 or values.shape[0] != expected:
            raise DomainError(
                f"parameter vector of length {values.size} does not match layout {layout} "
                f"(expected {expected})"
            )
        self.values = values
        self.layout = [(int(rows), int(cols)) for rows, cols in layout]

    @classmethod
    def zeros(cls, spec: MLPSpec) -> "ParamVector":
        return cls(np.zeros(spec.param_count), spec.layer_shapes)

    @classmethod
    def from_layers(cls, layers: list[tuple[np.ndarray, np.ndarray]]) -> "ParamVector":
        """Pack a list of (weight, bias) pairs."""
        chunks = []
        layout = []
        for weight, bias in layers:
            weight = np.asarray(weight, dtype=np.float64)
            bias = np.asarray(bias, dtype=np.float64).reshape(-1)
            if weight.ndim != 2 or bias.shape[0] != weight.shape[1]:
                raise DomainError(
                    f"bias of length {bias.shape[0]} does not fit weight {weight.shape}"
                )
            chunks.extend([weight.reshape(-1), bias])
            layout.append(weight.shape)
        return cls(np.concatenate(chunks), layout)

    def layers(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Views (weight, bias) per layer; writes go through to `values`."""
        out = []
        offset = 0
        for rows, cols in self.layout:
            weight = self.values[offset : offset + rows * cols].reshape(rows, cols)
            offset += rows * cols
            bias = self.values[offset : offset + cols]
            offset += cols
            out.append((weight, bias))
        return out

    def like(self, values: np.ndarray) -> "ParamVector":
        """New vector with the same layout."""
        return ParamVector(values, self.layout)

    def copy(self) -> "ParamVector":
        return ParamVector(self.values.copy(), self.layout)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def norm(self) -> float:
        return weight_norm(self)

    @property
    def direction(self) -> np.ndarray:
        """Unit vector w / ||w||."""
        norm = self.norm
        if norm == 0.0:
            raise DomainError("the zero vector has no direction")
        return self.values / norm

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"ParamVector(size={self.size}, norm={self.norm:.6g})"


def weight_norm(p: ParamVector) -> float:
    """L2 norm over every entry, biases included."""
    return float(np.linalg.norm(p.values))


def init_params(spec: MLPSpec, seed: int) -> ParamVector:
    """
    Kaiming-uniform draw, deterministic in `seed`.

    Weights of a layer with fan-in f are uniform on +-sqrt(6/f) for relu and
    +-1/sqrt(f) for tanh; biases are uniform on +-1/sqrt(f).
    """
    rng = np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out in spec.layer_shapes:
        if spec.activation == Activation.RELU:
            weight_bound = math.sqrt(6.0 / fan_in)
        else:
            weight_bound = 1.0 / math.sqrt(fan_in)
        bias_bound = 1.0 / math.sqrt(fan_in)
        weight = rng.uniform(-weight_bound, weight_bound, size=(fan_in, fan_out))
        bias = rng.uniform(-bias_bound, bias_bound, size=fan_out)
        layers.append((weight, bias))
    params = ParamVector.from_layers(layers)
    logger.debug(f"Initialised {spec.layer_widths} with seed {seed}: norm {params.norm:.6g}")
    return params


def scale_params(p: ParamVector, alpha: float) -> ParamVector:
    """Multiply every entry by alpha (alpha > 0)."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return p.like(p.values * alpha)
