"""
Tests for constrained minimisation, reduced curves and grids.
"""
import math

import numpy as np
import pytest

from app.core.exceptions import DomainError
from app.pydantic_models.landscape import CurvePoint, ReducedCurve
from app.pydantic_models.network import MLPSpec
from app.services.landscape import (
    critical_data_size,
    default_magnitude,
    log_w_axis,
    minimize_on_sphere,
    reduced_curve_1d,
    reduced_grid,
    regularized_train_landscape,
    shape_metrics,
    standard_norm,
)
from app.services.tasks import TeacherStudentDataSizeFamily, gen_teacher_student
from app.test.factory.landscape import SphereMinConfigFactory, grid_from
from app.utils.constants import AxisKind


def _curve(train: list[float], test: list[float], alphas: list[float] | None = None) -> ReducedCurve:
    alphas = alphas or [0.25 * (k + 1) for k in range(len(train))]
    points = [
        CurvePoint(alpha=a, w=a, train_loss=tr, test_loss=te, train_err=0.0, test_err=0.0)
        for a, tr, te in zip(alphas, train, test)
    ]
    return ReducedCurve(w0=1.0, param_count=4, spec=MLPSpec(layer_widths=[1, 1]), points=points)


def test_minimize_on_sphere_keeps_the_norm(tiny_teacher_student, tiny_student_spec):
    """Test the result lies on the sphere and the loss went down."""
    cfg = SphereMinConfigFactory()
    w = 2.0
    result = minimize_on_sphere(tiny_teacher_student, tiny_student_spec, w, cfg)
    assert not result.failed
    assert abs(result.params.norm - w) / w <= 1e-12
    assert result.convergence.max_norm_error <= 1e-12
    assert result.convergence.slope is not None
    assert np.linalg.norm(result.direction) == pytest.approx(1.0)
    start = minimize_on_sphere(tiny_teacher_student, tiny_student_spec, w, SphereMinConfigFactory(steps=1))
    assert result.train_loss < start.train_loss


def test_minimize_on_sphere_rejects_bad_norm(tiny_teacher_student, tiny_student_spec):
    """Test w <= 0 is a domain error."""
    with pytest.raises(DomainError):
        minimize_on_sphere(tiny_teacher_student, tiny_student_spec, 0.0, SphereMinConfigFactory())


def test_restarts_keep_the_lowest_train_loss(tiny_teacher_student, tiny_student_spec):
    """Test the kept restart is never worse than the first one."""
    single = minimize_on_sphere(tiny_teacher_student, tiny_student_spec, 1.5, SphereMinConfigFactory(steps=50))
    several = minimize_on_sphere(
        tiny_teacher_student, tiny_student_spec, 1.5, SphereMinConfigFactory(steps=50, restarts=3)
    )
    assert several.train_loss <= single.train_loss


def test_one_cell_grid_equals_direct_minimisation(tiny_student_spec):
    """Test a 1 x 1 grid reproduces minimize_on_sphere exactly."""
    cfg = SphereMinConfigFactory(steps=40)
    family = TeacherStudentDataSizeFamily(seed=0, n_test=12)
    grid = reduced_grid(family, tiny_student_spec, [1.7], [12], cfg)
    direct = minimize_on_sphere(gen_teacher_student(0, 12, 12), tiny_student_spec, 1.7, cfg)
    assert grid.shape == (1, 1)
    assert grid.train_loss[0][0] == direct.train_loss
    assert grid.test_loss[0][0] == direct.test_loss
    assert grid.test_err[0][0] == direct.test_err
    assert grid.meta["w0"] == standard_norm(tiny_student_spec, cfg.seed)


def test_parallel_grid_matches_serial(tiny_student_spec):
    """Test worker processes give the same grid as a serial run."""
    family = TeacherStudentDataSizeFamily(seed=0, n_test=8)
    w_values, n_values = [0.5, 1.0, 2.0], [4, 8]
    serial = reduced_grid(family, tiny_student_spec, w_values, n_values, SphereMinConfigFactory(steps=20))
    parallel = reduced_grid(family, tiny_student_spec, w_values, n_values, SphereMinConfigFactory(steps=20, workers=2))
    assert serial.train_loss == parallel.train_loss
    assert serial.test_loss == parallel.test_loss


def test_grid_axes_must_ascend(tiny_student_spec):
    """Test unsorted axes are rejected."""
    family = TeacherStudentDataSizeFamily()
    with pytest.raises(DomainError):
        reduced_grid(family, tiny_student_spec, [2.0, 1.0], [10], SphereMinConfigFactory())
    with pytest.raises(DomainError):
        reduced_grid(family, tiny_student_spec, [1.0], [20, 10], SphereMinConfigFactory())


def test_reduced_curve_and_regularisation(tiny_teacher_student, tiny_student_spec):
    """Test curve points sit at alpha * w0 and the regulariser adds gamma alpha^2 C^2."""
    alphas = [0.5, 1.0, 2.0]
    curve = reduced_curve_1d(tiny_teacher_student, tiny_student_spec, alphas, SphereMinConfigFactory(steps=30))
    assert curve.alphas == alphas
    for point in curve.points:
        assert point.w == pytest.approx(point.alpha * curve.w0)
    C = default_magnitude(curve)
    assert C == pytest.approx(curve.w0 / math.sqrt(tiny_student_spec.param_count))
    regularized = regularized_train_landscape(curve, gamma=0.1)
    for before, after in zip(curve.points, regularized.points):
        assert after.train_loss == pytest.approx(before.train_loss + 0.1 * before.alpha**2 * C**2)
        assert after.test_loss == before.test_loss
    assert regularized.meta["regularization"]["gamma"] == 0.1
    assert "regularization" not in curve.meta
    with pytest.raises(DomainError):
        regularized_train_landscape(curve, gamma=-1.0)


def test_reduced_curve_rejects_bad_alphas(tiny_teacher_student, tiny_student_spec):
    """Test alphas must be positive and ascending."""
    with pytest.raises(DomainError):
        reduced_curve_1d(tiny_teacher_student, tiny_student_spec, [1.0, 0.5], SphereMinConfigFactory())
    with pytest.raises(DomainError):
        reduced_curve_1d(tiny_teacher_student, tiny_student_spec, [0.0, 1.0], SphereMinConfigFactory())


def test_shape_metrics_l_and_u():
    """Test an L-shaped train curve and a U-shaped test curve."""
    curve = _curve(
        train=[0.5, 0.1, 0.01, 0.005, 0.006, 0.004],
        test=[0.6, 0.2, 0.1, 0.3, 0.5, 0.8],
    )
    metrics = shape_metrics(curve)
    assert metrics.is_L and metrics.is_U
    assert metrics.argmin_alpha == 0.75
    assert metrics.mismatch_region == (0.25, 1.5)


def test_shape_metrics_rejects_non_l_and_non_u():
    """Test a rising train curve and a monotone test curve."""
    metrics = shape_metrics(_curve(train=[0.1, 0.2, 0.3, 0.4, 0.5], test=[0.5, 0.4, 0.3, 0.2, 0.1]))
    assert not metrics.is_L
    assert not metrics.is_U
    assert metrics.argmin_alpha == 1.25
    with pytest.raises(DomainError):
        shape_metrics(_curve(train=[0.1] * 4, test=[0.1] * 4))


def test_critical_data_size():
    """Test the smallest N whose column reaches the error threshold."""
    grid = grid_from(
        train=lambda w, n: 0.0,
        test=lambda w, n: 1.0 / n + abs(math.log(w)),
        w_axis=[0.5, 1.0, 2.0],
        values=[2.0, 5.0, 10.0, 20.0],
        kind=AxisKind.DATA_SIZE,
    )
    assert critical_data_size(grid, 0.25) == 5
    assert critical_data_size(grid, 0.01) is None
    with pytest.raises(DomainError):
        critical_data_size(grid_from(train=lambda w, m: 0.0), 0.1)


def test_log_w_axis():
    """Test log spacing and argument checks."""
    axis = log_w_axis(1.0, 100.0, 3)
    assert axis == pytest.approx([1.0, 10.0, 100.0])
    with pytest.raises(DomainError):
        log_w_axis(2.0, 1.0, 3)
    with pytest.raises(DomainError):
        log_w_axis(1.0, 2.0, 1)
