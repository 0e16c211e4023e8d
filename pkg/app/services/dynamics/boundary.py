"""
Train-loss level sets on (w, m) grids and the angle of the region boundary.
"""

import logging
import math
from collections.abc import Mapping

import numpy as np

from app.core.exceptions import DomainError
from app.pydantic_models.dynamics import BoundaryContour
from app.pydantic_models.landscape import LandscapeGrid

from .interpolate import LandscapeInterpolant

logger = logging.getLogger(__name__)

# contours whose smallest m is at most this reach the generalizing region
CONNECT_M = 0.2


def _edge_crossings(a: np.ndarray, b: np.ndarray, level: float) -> np.ndarray:
    """Fraction along each edge a -> b where the level is crossed (nan if not)."""
    with np.errstate(invalid="ignore", divide="ignore"):
        crosses = ((a - level) * (b - level) < 0) | ((a == level) & (b != level))
        frac = np.where(crosses, (level - a) / (b - a), np.nan)
    return frac


def level_set_points(interp: LandscapeInterpolant, level: float) -> list[tuple[float, float]]:
    """
    (m, w) points where the bilinear interpolant equals `level`.

    Crossings are taken on the edges of every grid cell, where the
    interpolant is linear; edges touching failed cells are skipped.
    """
    values, log_w, m = interp.values, interp.log_w, interp.m
    points: list[tuple[float, float]] = []

    # edges along w at fixed m
    frac = _edge_crossings(values[:-1, :], values[1:, :], level)
    for i, j in zip(*np.nonzero(np.isfinite(frac))):
        x = log_w[i] + frac[i, j] * (log_w[i + 1] - log_w[i])
        points.append((float(m[j]), math.exp(x)))

    # edges along m at fixed w
    frac = _edge_crossings(values[:, :-1], values[:, 1:], level)
    for i, j in zip(*np.nonzero(np.isfinite(frac))):
        y = m[j] + frac[i, j] * (m[j + 1] - m[j])
        points.append((float(y), math.exp(log_w[i])))

    # a level hit exactly at the last node of an edge
    last_i, last_j = values.shape[0] - 1, values.shape[1] - 1
    if values[last_i, last_j] == level:
        points.append((float(m[last_j]), math.exp(log_w[last_i])))
    return sorted(set(points))


def contour_segments(
    values: np.ndarray, xs: np.ndarray, ys: np.ndarray, level: float
) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """
    Marching squares over a node matrix values[i, j] at (xs[i], ys[j]).

    Returns line segments ((x, y), (x, y)) of the level set, linear along
    cell edges. Cells with a non-finite corner are skipped; saddle cells
    are split by the cell-centre average.
    """
    segments = []
    for i in range(values.shape[0] - 1):
        for j in range(values.shape[1] - 1):
            corners = [
                (xs[i], ys[j], values[i, j]),
                (xs[i + 1], ys[j], values[i + 1, j]),
                (xs[i + 1], ys[j + 1], values[i + 1, j + 1]),
                (xs[i], ys[j + 1], values[i, j + 1]),
            ]
            if not all(np.isfinite(v) for _, _, v in corners):
                continue
            crossings = []
            for (xa, ya, va), (xb, yb, vb) in zip(corners, corners[1:] + corners[:1]):
                if (va - level) * (vb - level) < 0 or (va == level and vb != level):
                    frac = (level - va) / (vb - va)
                    crossings.append((float(xa + frac * (xb - xa)), float(ya + frac * (yb - ya))))
            if len(crossings) == 2:
                segments.append((crossings[0], crossings[1]))
            elif len(crossings) == 4:
                centre = np.mean([v for _, _, v in corners])
                if (centre - level) * (corners[0][2] - level) > 0:
                    segments += [(crossings[0], crossings[1]), (crossings[2], crossings[3])]
                else:
                    segments += [(crossings[0], crossings[3]), (crossings[1], crossings[2])]
    return segments


def contour_for(grid: LandscapeGrid, level: float, n_train: int, connect_m: float = CONNECT_M) -> BoundaryContour | None:
    """Level set of one grid with a line log w = a + b m fitted through it."""
    interp = LandscapeInterpolant(grid, "train_loss")
    points = level_set_points(interp, level)
    if not points:
        logger.info(f"No train-loss contour at level {level} for n_train={n_train}")
        return None
    ms = np.array([p[0] for p in points])
    log_ws = np.log([p[1] for p in points])
    if len(points) < 2 or np.ptp(ms) == 0:
        slope = math.inf if np.ptp(log_ws) > 0 else 0.0
    else:
        slope = float(np.polyfit(ms, log_ws, 1)[0])
    angle = math.pi / 2 if math.isinf(slope) else math.atan(abs(slope))
    return BoundaryContour(
        n_train=n_train,
        level=level,
        points=points,
        slope=slope,
        angle=angle,
        min_m=float(ms.min()),
        connects=bool(ms.min() <= connect_m),
    )


def boundary_angle(
    grids: Mapping[int, LandscapeGrid],
    level: float | Mapping[int, float] = 0.02,
    connect_m: float = CONNECT_M,
) -> dict[int, BoundaryContour | None]:
    """
    Boundary contour and its angle for each training-set size.

    Args:
        grids: (w, m) grids keyed by training-set size.
        level: Train-loss level, shared or per size.
        connect_m: m below which a contour counts as reaching the
            generalizing solution.

    Returns:
        Contours keyed by size, None where the level set is empty.
    """
    if not grids:
        raise DomainError("boundary_angle needs at least one grid")
    contours = {}
    for n_train in sorted(grids):
        size_level = level[n_train] if isinstance(level, Mapping) else level
        contours[n_train] = contour_for(grids[n_train], size_level, n_train, connect_m)
    return contours
