"""
Tests for optimizers and norm projection.
"""
import math

import numpy as np
import pytest

from app.core.exceptions import DomainError, NumericError
from app.pydantic_models.network import OptimConfig
from app.services.network import ParamVector, init_params
from app.services.optim import OptimState, decay_norm_prediction, opt_step, project_norm, step_array
from app.utils.constants import OptimizerKind


def _decay(p: ParamVector, cfg: OptimConfig, steps: int) -> list[float]:
    state = OptimState.for_params(p)
    zero = p.like(np.zeros(p.size))
    norms = [p.norm]
    for _ in range(steps):
        p, state = opt_step(cfg, state, p, zero)
        norms.append(p.norm)
    return norms


def test_adamw_zero_gradient_is_geometric(small_spec):
    """Test decoupled decay shrinks the norm by exactly (1 - lr gamma) per step."""
    p = init_params(small_spec, 0)
    cfg = OptimConfig(kind=OptimizerKind.ADAMW, lr=1e-2, weight_decay=0.5)
    norms = _decay(p, cfg, 200)
    for t, norm in enumerate(norms):
        assert norm == pytest.approx(p.norm * (1 - cfg.lr * cfg.weight_decay) ** t, rel=1e-12)


def test_sgd_zero_gradient_tracks_exponential(small_spec):
    """Test sgd decay follows w0 exp(-gamma lr t) within 2% while gamma lr t <= 1."""
    p = init_params(small_spec, 0)
    cfg = OptimConfig(kind=OptimizerKind.SGD, lr=1e-2, weight_decay=1.0)
    norms = _decay(p, cfg, 100)
    for t, norm in enumerate(norms):
        predicted = decay_norm_prediction(p.norm, cfg.weight_decay, cfg.lr * t)
        assert norm == pytest.approx(predicted, rel=0.02)


def test_adam_coupled_decay_moves_by_lr():
    """Test Adam's first step on gamma * p alone moves every entry by lr."""
    cfg = OptimConfig(kind=OptimizerKind.ADAM, lr=0.1, weight_decay=0.5)
    values, state = step_array(cfg, OptimState(2), np.array([1.0, -2.0]), np.zeros(2))
    assert values == pytest.approx([0.9, -1.9], abs=1e-6)
    assert state.step_count == 1


def test_sgd_step():
    """Test p <- p - lr (g + gamma p)."""
    cfg = OptimConfig(kind=OptimizerKind.SGD, lr=0.1, weight_decay=0.5)
    values, _ = step_array(cfg, OptimState(2), np.array([1.0, 2.0]), np.array([1.0, -1.0]))
    assert values == pytest.approx([1.0 - 0.1 * 1.5, 2.0 - 0.1 * 0.0])


def test_step_rejects_bad_inputs():
    """Test layout mismatches and non-finite gradients."""
    cfg = OptimConfig(kind=OptimizerKind.SGD, lr=0.1)
    with pytest.raises(DomainError):
        step_array(cfg, OptimState(2), np.zeros(2), np.zeros(3))
    with pytest.raises(NumericError) as info:
        step_array(cfg, OptimState(2), np.zeros(2), np.array([np.nan, 0.0]))
    assert info.value.step == 1


def test_project_norm(small_spec):
    """Test projection hits the target norm and keeps the direction."""
    p = init_params(small_spec, 0)
    for target in (1e-3, 0.7, 42.0):
        projected = project_norm(p, target)
        assert abs(projected.norm - target) / target <= 1e-12
        assert np.allclose(projected.direction, p.direction, rtol=0, atol=1e-12)
    with pytest.raises(DomainError):
        project_norm(p, 0.0)
    with pytest.raises(DomainError):
        project_norm(ParamVector.zeros(small_spec), 1.0)


def test_decay_norm_prediction():
    """Test the closed-form norm decay."""
    assert decay_norm_prediction(2.0, 0.1, 10.0) == pytest.approx(2.0 * math.exp(-1.0))
    with pytest.raises(DomainError):
        decay_norm_prediction(0.0, 0.1, 1.0)


@pytest.mark.parametrize("kind", list(OptimizerKind))
def test_projection_holds_the_norm_over_many_steps(small_spec, kind):
    """Test projecting after every step keeps the norm at the target for 10^4 steps."""
    rng = np.random.default_rng(0)
    p = init_params(small_spec, 0)
    target = 2.5 * p.norm
    p = project_norm(p, target)
    cfg = OptimConfig(kind=kind, lr=1e-2, weight_decay=0.1)
    state = OptimState.for_params(p)
    worst = 0.0
    for _ in range(10_000):
        p, state = opt_step(cfg, state, p, p.like(rng.standard_normal(p.size)))
        p = project_norm(p, target)
        worst = max(worst, abs(p.norm - target) / target)
    assert worst <= 1e-12


@pytest.mark.parametrize("scale", [1e-3, 0.5, 7.0])
def test_sgd_update_scales_with_the_parameters(scale):
    """Test scaling parameters and gradient together scales the sgd update."""
    rng = np.random.default_rng(1)
    p, g = rng.standard_normal(12), rng.standard_normal(12)
    cfg = OptimConfig(kind=OptimizerKind.SGD, lr=0.05, weight_decay=0.3)
    base, _ = step_array(cfg, OptimState(12), p, g)
    scaled, _ = step_array(cfg, OptimState(12), scale * p, scale * g)
    assert np.allclose(scaled, scale * base, rtol=1e-12, atol=0)


@pytest.mark.parametrize("gamma", [0.01, 0.5, 3.0])
def test_decay_norm_prediction_half_life(gamma):
    """Test the norm halves at t = ln 2 / gamma."""
    assert decay_norm_prediction(4.0, gamma, math.log(2) / gamma) == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("t", [0.0, 1.0, 1e6])
def test_decay_norm_prediction_without_decay(t):
    """Test gamma = 0 leaves w0 untouched."""
    assert decay_norm_prediction(3.0, 0.0, t) == 3.0
