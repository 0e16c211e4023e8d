"""
Factories for sphere-minimisation settings and synthetic landscape grids.
"""
import math
from collections.abc import Callable

import factory
import numpy as np

from app.pydantic_models.dynamics import DynamicsConfig
from app.pydantic_models.landscape import LandscapeGrid, SecondAxis, SphereMinConfig
from app.utils.constants import AxisKind, OptimizerKind

Surface = Callable[[float, float], float]


def bowl(w: float, m: float) -> float:
    """Quadratic in (log w, m) with its minimum at w = e^0.5, m = 0.2."""
    return (math.log(w) - 0.5) ** 2 + 0.5 * (m - 0.2) ** 2 + 0.1 * math.log(w) * m


def tabulate(surface: Surface, w_axis: list[float], values: list[float]) -> list[list[float]]:
    return [[float(surface(w, v)) for v in values] for w in w_axis]


def grid_from(
    train: Surface,
    test: Surface | None = None,
    w_axis: list[float] | None = None,
    values: list[float] | None = None,
    kind: AxisKind = AxisKind.MESSINESS,
) -> LandscapeGrid:
    """A grid whose cells hold surface values at the nodes; errors mirror the losses."""
    w_axis = w_axis or [float(w) for w in np.geomspace(0.5, 8.0, 9)]
    values = values or [0.0, 0.25, 0.5, 0.75, 1.0]
    test = test or train
    train_loss = tabulate(train, w_axis, values)
    test_loss = tabulate(test, w_axis, values)
    return LandscapeGrid(
        meta={"task": {"task": "synthetic"}},
        w_axis=w_axis,
        second_axis=SecondAxis(kind=kind, values=values),
        train_loss=train_loss,
        test_loss=test_loss,
        train_err=[[min(v, 1.0) for v in row] for row in train_loss],
        test_err=[[min(v, 1.0) for v in row] for row in test_loss],
        failed=[[False] * len(values) for _ in w_axis],
    )


def with_failed_cells(grid: LandscapeGrid, cells: list[tuple[int, int]]) -> LandscapeGrid:
    """Copy of grid with the given (w index, m index) cells marked failed."""
    failed = grid.model_copy(deep=True)
    for i, j in cells:
        for name in ("train_loss", "test_loss", "train_err", "test_err"):
            getattr(failed, name)[i][j] = None
        failed.failed[i][j] = True
    return failed


class LandscapeGridFactory(factory.Factory):
    """(w, m) grid of the bowl surface; pass `values` to change the m axis."""

    class Meta:
        model = LandscapeGrid

    class Params:
        values = factory.LazyFunction(lambda: [0.0, 0.25, 0.5, 0.75, 1.0])

    meta = factory.LazyFunction(lambda: {"task": {"task": "synthetic"}})
    w_axis = factory.LazyFunction(lambda: [float(w) for w in np.geomspace(0.5, 8.0, 9)])
    second_axis = factory.LazyAttribute(lambda o: SecondAxis(kind=AxisKind.MESSINESS, values=o.values))
    train_loss = factory.LazyAttribute(lambda o: tabulate(bowl, o.w_axis, o.values))
    test_loss = factory.LazyAttribute(lambda o: tabulate(bowl, o.w_axis, o.values))
    train_err = factory.LazyAttribute(lambda o: [[min(v, 1.0) for v in row] for row in o.train_loss])
    test_err = factory.LazyAttribute(lambda o: [[min(v, 1.0) for v in row] for row in o.test_loss])
    failed = factory.LazyAttribute(lambda o: [[False] * len(o.values) for _ in o.w_axis])


class SphereMinConfigFactory(factory.Factory):
    """A few hundred Adam steps: enough to move, cheap enough for unit tests."""

    class Meta:
        model = SphereMinConfig

    steps = 150
    lr = 1e-2
    optimizer = OptimizerKind.ADAM
    seed = 0
    restarts = 1
    check_every = 10
    slope_window = 20
    workers = 1


class DynamicsConfigFactory(factory.Factory):
    class Meta:
        model = DynamicsConfig

    eta_d = 1.0
    eta_r = 1.0
    gamma = 0.01
    dt = 0.01
    max_steps = 200
    record_every = 10
