"""
Desk-scale reproductions of the grokking phenomena.

These train for minutes each and are deselected by default; run them with
`pytest -m slow`. The MNIST checks need GROKLAB_MNIST_DIR.
"""
import os

import numpy as np
import pytest

from app.core.config import get_config
from app.pydantic_models.dynamics import DynamicsConfig
from app.pydantic_models.experiment import ExperimentConfig
from app.pydantic_models.landscape import SphereMinConfig
from app.services.dynamics import (
    LandscapeInterpolant,
    boundary_angle,
    count_descents,
    integrate_reduced,
    log_w_speed,
    plateau_segment,
)
from app.services.experiments import (
    degrok_experiment,
    generalization_delay,
    run_training,
    sweep,
    time_to_level,
)
from app.services.landscape import log_w_axis, reduced_curve_1d, reduced_grid, shape_metrics, standard_norm
from app.services.tasks import AdditionMessinessFamily, gen_teacher_student
from app.utils.constants import DEFAULT_ALPHA_GRID, ConfigFile, LossKind, Metric, SweepParam, TaskKind

pytestmark = pytest.mark.slow

WORKERS = os.cpu_count() or 1
M_AXIS = [round(0.1 * k, 1) for k in range(11)]
GRID_SIZES = (25, 35, 45, 55)


def task_config(task: TaskKind, **overrides) -> ExperimentConfig:
    """Run config from the [training.<task>] defaults the CLI starts from."""
    fields = ExperimentConfig.model_fields
    defaults = {k: v for k, v in get_config(ConfigFile.TEST).task_defaults(task).items() if k in fields}
    return ExperimentConfig.model_validate({**defaults, **overrides, "task": task.value})


def teacher_student(alpha: float, gamma: float) -> ExperimentConfig:
    return task_config(TaskKind.TEACHER_STUDENT, alpha=alpha, weight_decay=gamma)


def addition_grid(train_size: int):
    family = AdditionMessinessFamily(p=10, train_size=train_size, seed=0)
    spec = family.build(1.0).spec()
    cfg = SphereMinConfig(steps=5000, lr=1e-3, workers=WORKERS)
    w0 = standard_norm(spec, cfg.seed)
    return reduced_grid(family, spec, log_w_axis(0.25 * w0, 4 * w0, 9), M_AXIS, cfg)


@pytest.fixture(scope="module")
def addition_grids():
    return {size: addition_grid(size) for size in GRID_SIZES}


def test_reduced_curve_is_l_and_u_shaped():
    """Test train loss falls monotonically with alpha while test loss has an interior minimum."""
    task = gen_teacher_student(seed=0, n_train=100, n_test=100)
    curve = reduced_curve_1d(task, task.spec(), list(DEFAULT_ALPHA_GRID), SphereMinConfig(workers=WORKERS))
    metrics = shape_metrics(curve, tau_L=0.02)
    assert 0.7 <= metrics.argmin_alpha <= 1.5
    assert metrics.is_U
    assert metrics.is_L


def test_grokking_regimes_at_large_alpha():
    """Test weight decay turns memorisation into delayed generalization at alpha = 2."""
    no_decay = run_training(teacher_student(2.0, 0.0))
    assert time_to_level(no_decay, Metric.TRAIN_ACC, 0.95) is not None
    assert time_to_level(no_decay, Metric.TEST_ACC, 0.95) is None

    slow = generalization_delay(run_training(teacher_student(2.0, 0.03)), 0.95)
    fast = generalization_delay(run_training(teacher_student(2.0, 1.0)), 0.95)
    assert slow is not None and slow >= 10
    assert fast is not None and fast < slow


@pytest.mark.parametrize("gamma", [0.0, 0.03, 1.0])
def test_no_grokking_at_small_alpha(gamma):
    """Test train and test accuracy rise together at alpha = 0.5."""
    delay = generalization_delay(run_training(teacher_student(0.5, gamma)), 0.95)
    assert delay is not None and delay <= 3


def test_grokking_time_scales_inversely_with_weight_decay():
    """Test time-to-generalize ~ 1 / gamma while time-to-fit stays put."""
    gammas = [0.03, 0.06, 0.125, 0.25, 0.5, 1.0]
    result = sweep(teacher_student(2.0, 0.0), SweepParam.WEIGHT_DECAY, gammas, Metric.TEST_ACC, 0.95, WORKERS)
    assert result.fit is not None
    assert result.fit.slope == pytest.approx(-1.0, abs=0.3)
    train_times = [time_to_level(o.records, Metric.TRAIN_ACC, 0.95) for o in result.outcomes]
    assert all(t is not None for t in train_times)
    assert max(train_times) < 2 * max(min(train_times), 1)


def test_addition_landscape_structure(addition_grids):
    """Test large norms fit every m but generalize far worse at messy m."""
    grid = addition_grids[45]
    top = range(len(grid.w_axis) * 3 // 4, len(grid.w_axis))
    best_test = min(v for row in grid.test_loss for v in row if v is not None)
    for i in top:
        assert all(v is not None and v <= 0.05 for v in grid.train_loss[i])
        for j, m in enumerate(grid.second_axis.values):
            if m >= 0.8:
                assert grid.test_loss[i][j] >= 5 * best_test


def test_data_size_contours(addition_grids):
    """Test only the larger training sets connect to the structured representation."""
    contours = boundary_angle(addition_grids, level=0.02)
    assert contours[45] is not None and contours[45].connects
    assert contours[55] is not None and contours[55].connects
    for size in (25, 35):
        assert contours[size] is None or not contours[size].connects


def test_reduced_dynamics_plateau_then_descent(addition_grids):
    """Test the flow first shrinks w at rate eta_d * gamma, then lowers m, with several test descents."""
    grid = addition_grids[45]
    cfg = DynamicsConfig(eta_d=1.0, eta_r=1.0, gamma=0.01, dt=0.01, max_steps=100_000, record_every=10)
    trajectory = integrate_reduced(grid, (grid.w_axis[-1], 1.0), cfg)
    plateau = plateau_segment(trajectory, LandscapeInterpolant(grid), grad_tol=1e-3)
    assert plateau is not None
    speed = log_w_speed(trajectory, *plateau)
    assert speed == pytest.approx(-cfg.eta_d * cfg.gamma, rel=0.1)
    after = [s.m for s in trajectory.samples if s.t >= plateau[1]]
    assert after[-1] < after[0]
    assert count_descents(trajectory.column("test_loss")) >= 2


def test_constrained_norm_removes_the_delay():
    """Test pinning the norm at alpha = 0.8 de-groks addition."""
    base = task_config(TaskKind.ADDITION, alpha=3.0)
    result = degrok_experiment(base)
    pinned = generalization_delay(result.constrained, 0.9)
    free = generalization_delay(result.unconstrained, 0.9)
    assert pinned is not None and pinned <= 2
    assert free is not None and free >= 5

    norms = result.unconstrained.column("weight_norm")
    fit_step = time_to_level(result.unconstrained, Metric.TRAIN_ACC, 0.9)
    peak = int(np.argmax(norms))
    assert result.unconstrained.steps[peak] >= fit_step
    assert norms[-1] < norms[0]


@pytest.fixture
def real_mnist_dir() -> str:
    directory = os.getenv("GROKLAB_MNIST_DIR")
    if not directory:
        pytest.skip("GROKLAB_MNIST_DIR is not set")
    return directory


def mnist_config(directory: str, alpha: float, loss: LossKind) -> ExperimentConfig:
    return task_config(TaskKind.MNIST, mnist_dir=directory, alpha=alpha, loss=loss)


def test_mnist_grokking(real_mnist_dir):
    """Test train accuracy saturates an order of magnitude before test accuracy reaches 0.85."""
    records = run_training(mnist_config(real_mnist_dir, 9.0, LossKind.MSE))
    train_time = time_to_level(records, Metric.TRAIN_ACC, 1.0)
    test_time = time_to_level(records, Metric.TEST_ACC, 0.85)
    assert train_time is not None and test_time is not None
    assert test_time >= 10 * max(train_time, 1)
    assert records.final.test_acc >= 0.85


def test_mnist_cross_entropy_late_improvement(real_mnist_dir):
    """Test test accuracy keeps rising well after the training set is fit."""
    records = run_training(mnist_config(real_mnist_dir, 100.0, LossKind.CROSS_ENTROPY))
    train_time = time_to_level(records, Metric.TRAIN_ACC, 1.0)
    assert train_time is not None
    at_fit = next(row.test_acc for row in records.rows if row.step == train_time)
    later = max(row.test_acc for row in records.rows if row.step >= train_time)
    assert at_fit > 0.1
    assert later - at_fit >= 0.15
