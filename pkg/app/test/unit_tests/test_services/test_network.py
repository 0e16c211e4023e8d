"""
Tests for the dense MLP engine.
"""
import math

import numpy as np
import pytest

from app.core.exceptions import DomainError
from app.pydantic_models.network import MLPSpec
from app.services.network import (
    Batch,
    ParamVector,
    accuracy,
    check_gradient,
    forward,
    init_params,
    loss_and_grads,
    loss_grad,
    loss_value,
    scale_params,
    weight_norm,
)
from app.utils.constants import AccuracyMode, Activation, LossKind


def test_init_params_is_deterministic(small_spec):
    """Test the same (spec, seed) gives identical vectors."""
    a = init_params(small_spec, 3)
    b = init_params(small_spec, 3)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, init_params(small_spec, 4).values)


def test_layout_arithmetic():
    """Test a [2, 3] spec has 2*3 + 3 parameters."""
    spec = MLPSpec(layer_widths=[2, 3])
    assert len(init_params(spec, 0)) == 9
    assert spec.param_count == 9


@pytest.mark.parametrize("activation", [Activation.RELU, Activation.TANH])
def test_init_bounds(activation):
    """Test per-layer weights respect the Kaiming-uniform bounds."""
    spec = MLPSpec(layer_widths=[5, 100, 100, 5], activation=activation)
    params = init_params(spec, 0)
    for (fan_in, _), (weight, bias) in zip(spec.layer_shapes, params.layers()):
        bound = math.sqrt(6 / fan_in) if activation == Activation.RELU else 1 / math.sqrt(fan_in)
        assert np.abs(weight).max() <= bound
        assert np.abs(bias).max() <= 1 / math.sqrt(fan_in)


def test_widths_must_be_positive():
    """Test invalid specs are rejected."""
    with pytest.raises(ValueError):
        MLPSpec(layer_widths=[3, 0, 2])
    with pytest.raises(ValueError):
        MLPSpec(layer_widths=[3])


def test_scale_params(small_spec):
    """Test scaling multiplies the norm and composes."""
    p = init_params(small_spec, 0)
    assert np.array_equal(scale_params(p, 1.0).values, p.values)
    assert weight_norm(scale_params(p, 2.0)) == pytest.approx(2 * p.norm, rel=1e-12)
    twice = scale_params(scale_params(p, 0.5), 0.5)
    assert np.allclose(twice.values, 0.25 * p.values, rtol=1e-15, atol=0)
    with pytest.raises(DomainError):
        scale_params(p, 0.0)
    with pytest.raises(DomainError):
        scale_params(p, -1.0)


def test_weight_norm_zero_iff_zero(small_spec):
    """Test the norm vanishes only on the zero vector."""
    assert weight_norm(ParamVector.zeros(small_spec)) == 0.0
    assert weight_norm(init_params(small_spec, 0)) > 0.0


def test_forward_zero_params(small_spec):
    """Test a zero network outputs zeros."""
    X = np.random.default_rng(0).standard_normal((4, 3))
    assert np.array_equal(forward(small_spec, ParamVector.zeros(small_spec), X), np.zeros((4, 2)))


def test_forward_hand_arithmetic():
    """Test a single affine layer [2, 1] with weights [1, 1]."""
    spec = MLPSpec(layer_widths=[2, 1])
    p = ParamVector.from_layers([(np.array([[1.0], [1.0]]), np.array([0.0]))])
    assert forward(spec, p, np.array([[3.0, 4.0]]))[0, 0] == 7.0


def test_forward_shape_mismatch(small_spec):
    """Test a wrong input width raises a domain error."""
    with pytest.raises(DomainError):
        forward(small_spec, init_params(small_spec, 0), np.zeros((2, 4)))


def test_batch_row_counts_must_agree():
    """Test mismatched rows are rejected."""
    with pytest.raises(DomainError):
        Batch(np.zeros((3, 2)), np.zeros((2, 1)))
    with pytest.raises(DomainError):
        Batch(np.zeros((3, 2)), np.zeros((3, 1)), labels=np.zeros(2))


@pytest.mark.parametrize("kind", [LossKind.MSE, LossKind.CROSS_ENTROPY])
def test_gradient_matches_finite_differences(small_spec, small_batch, kind):
    """Test analytic gradients agree with central differences."""
    p = init_params(small_spec, 1)
    error = check_gradient(small_spec, p, small_batch, kind, n_coords=p.size)
    assert error <= 1e-5


def test_relu_gradient_matches_finite_differences(small_batch):
    """Test the relu backward pass."""
    spec = MLPSpec(layer_widths=[3, 6, 2], activation=Activation.RELU)
    p = init_params(spec, 2)
    assert check_gradient(spec, p, small_batch, LossKind.MSE, n_coords=p.size) <= 1e-5


def test_input_gradient(small_spec, small_batch):
    """Test the gradient w.r.t. the inputs against central differences."""
    p = init_params(small_spec, 0)
    result = loss_and_grads(small_spec, p, small_batch, input_grad=True)
    h = 1e-6
    for row, col in [(0, 0), (3, 1), (7, 2)]:
        plus, minus = small_batch.inputs.copy(), small_batch.inputs.copy()
        plus[row, col] += h
        minus[row, col] -= h
        f_plus = loss_value(forward(small_spec, p, plus), small_batch, LossKind.MSE)
        f_minus = loss_value(forward(small_spec, p, minus), small_batch, LossKind.MSE)
        assert result.input_grad[row, col] == pytest.approx((f_plus - f_minus) / (2 * h), rel=1e-5, abs=1e-10)


def test_cross_entropy_needs_labels():
    """Test cross entropy without labels is a domain error."""
    batch = Batch(np.zeros((2, 1)), np.zeros((2, 2)))
    with pytest.raises(DomainError):
        loss_value(np.zeros((2, 2)), batch, LossKind.CROSS_ENTROPY)


def test_accuracy_modes():
    """Test threshold, argmax and nearest-target accuracy."""
    targets = np.array([[1.0, 0.0], [0.0, 1.0]])
    batch = Batch(np.zeros((2, 1)), targets, np.array([0, 1]))
    outputs = np.array([[1.005, 0.0], [0.9, 0.1]])
    assert accuracy(outputs, batch, AccuracyMode.REGRESSION_THRESHOLD, theta=0.01) == 0.5
    assert accuracy(outputs, batch, AccuracyMode.ARGMAX) == 0.5
    assert accuracy(outputs, batch, AccuracyMode.NEAREST_TARGET, codebook=targets) == 0.5
    # ties go to the lowest index
    tie = Batch(np.zeros((1, 1)), np.zeros((1, 2)), np.array([0]))
    assert accuracy(np.array([[0.5, 0.5]]), tie, AccuracyMode.ARGMAX) == 1.0


@pytest.mark.parametrize("logit", [0.0, 3.5, -20.0])
def test_uniform_logits_cross_entropy_is_log_of_class_count(logit):
    """Test equal logits over 10 classes give ln 10 whatever the label."""
    labels = np.arange(10)
    batch = Batch(np.zeros((10, 1)), np.eye(10)[labels], labels)
    Y = np.full((10, 10), logit)
    assert loss_value(Y, batch, LossKind.CROSS_ENTROPY) == pytest.approx(math.log(10), rel=1e-12)


def _scalar_loss(Y: np.ndarray, batch: Batch, kind: LossKind) -> float:
    total = 0.0
    for row in range(Y.shape[0]):
        if kind == LossKind.MSE:
            for col in range(Y.shape[1]):
                total += (Y[row, col] - batch.targets[row, col]) ** 2 / Y.size
        else:
            norm = sum(math.exp(value) for value in Y[row])
            total -= math.log(math.exp(Y[row, batch.labels[row]]) / norm) / Y.shape[0]
    return total


@pytest.mark.parametrize("kind", [LossKind.MSE, LossKind.CROSS_ENTROPY])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_loss_value_matches_a_scalar_loop(kind, seed):
    """Test the vectorised losses against a per-entry sum."""
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 4, size=6)
    batch = Batch(np.zeros((6, 1)), np.eye(4)[labels], labels)
    Y = rng.standard_normal((6, 4))
    assert loss_value(Y, batch, kind) == pytest.approx(_scalar_loss(Y, batch, kind), rel=1e-12)


@pytest.mark.parametrize("kind", [LossKind.MSE, LossKind.CROSS_ENTROPY])
@pytest.mark.parametrize("seed", [0, 5])
def test_loss_grad_reports_the_forward_loss(small_spec, small_batch, kind, seed):
    """Test the loss returned with the gradient equals the forward-pass loss."""
    p = init_params(small_spec, seed)
    loss, grad = loss_grad(small_spec, p, small_batch, kind)
    assert abs(loss - loss_value(forward(small_spec, p, small_batch.inputs), small_batch, kind)) <= 1e-14
    assert grad.layout == p.layout
