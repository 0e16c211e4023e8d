"""
Dense MLP forward pass and reverse-mode backpropagation.

Hidden layers apply the MLPSpec activation, the last layer is affine.
Everything runs in float64.
"""

import numpy as np

from app.core.exceptions import DomainError
from app.pydantic_models.network import MLPSpec
from app.utils.constants import Activation, LossKind

from .batch import Batch
from .losses import loss_output_grad, loss_value
from .params import ParamVector


class GradResult:
    """Loss, parameter gradient and (optionally) gradient w.r.t. the inputs."""

    def __init__(self, loss: float, grad: ParamVector, input_grad: np.ndarray | None = None):
        self.loss = loss
        self.grad = grad
        self.input_grad = input_grad


def _activate(spec: MLPSpec, z: np.ndarray) -> np.ndarray:
    if spec.activation == Activation.RELU:
        return np.maximum(z, 0.0)
    return np.tanh(z)


def _activation_grad(spec: MLPSpec, h: np.ndarray) -> np.ndarray:
    """Derivative of the activation expressed through its output h."""
    if spec.activation == Activation.RELU:
        return (h > 0.0).astype(np.float64)
    return 1.0 - h * h


def _check_compatible(spec: MLPSpec, p: ParamVector, X: np.ndarray) -> None:
    if p.layout != spec.layer_shapes:
        raise DomainError(f"parameter layout {p.layout} does not match spec {spec.layer_widths}")
    if X.ndim != 2 or X.shape[1] != spec.input_width:
        raise DomainError(
            f"input of shape {X.shape} does not match input width {spec.input_width}"
        )


def _forward_cached(spec: MLPSpec, p: ParamVector, X: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Outputs plus the input of every layer (needed by the backward pass)."""
    X = np.asarray(X, dtype=np.float64)
    _check_compatible(spec, p, X)
    layers = p.layers()
    inputs = []
    h = X
    for index, (weight, bias) in enumerate(layers):
        inputs.append(h)
        z = h @ weight + bias
        h = z if index == len(layers) - 1 else _activate(spec, z)
    return h, inputs


def forward(spec: MLPSpec, p: ParamVector, X: np.ndarray) -> np.ndarray:
    """N x d_out outputs of the network on the rows of X."""
    outputs, _ = _forward_cached(spec, p, X)
    return outputs


def loss_and_grads(
    spec: MLPSpec,
    p: ParamVector,
    batch: Batch,
    kind: LossKind | None = None,
    input_grad: bool = False,
) -> GradResult:
    """
    Loss on `batch` with its analytic gradient.

    With `input_grad=True` the gradient w.r.t. the batch inputs is returned
    as well (used to train input representations).
    """
    kind = LossKind.parse(kind or spec.loss)
    outputs, inputs = _forward_cached(spec, p, batch.inputs)
    loss = loss_value(outputs, batch, kind)
    delta = loss_output_grad(outputs, batch, kind)

    grad = ParamVector.zeros(spec)
    grad_layers = grad.layers()
    layers = p.layers()
    d_inputs = None
    for index in range(len(layers) - 1, -1, -1):
        weight, _ = layers[index]
        grad_weight, grad_bias = grad_layers[index]
        layer_input = inputs[index]
        grad_weight[...] = layer_input.T @ delta
        grad_bias[...] = delta.sum(axis=0)
        if index > 0:
            delta = (delta @ weight.T) * _activation_grad(spec, layer_input)
        elif input_grad:
            d_inputs = delta @ weight.T
    return GradResult(loss, grad, d_inputs)


def loss_grad(
    spec: MLPSpec, p: ParamVector, batch: Batch, kind: LossKind | None = None
) -> tuple[float, ParamVector]:
    """(loss, dloss/dp) with the same layout as p."""
    result = loss_and_grads(spec, p, batch, kind)
    return result.loss, result.grad
