"""
Piecewise bilinear interpolant of a (w, m) landscape in (log w, m).
"""

import math

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from app.core.exceptions import DomainError, OutOfBoundsError
from app.pydantic_models.landscape import LandscapeGrid
from app.utils.constants import AxisKind

HULL_SLACK = 1e-12


def _matrix(grid: LandscapeGrid, metric: str) -> np.ndarray:
    return np.array(
        [[np.nan if value is None else value for value in row] for row in getattr(grid, metric)],
        dtype=np.float64,
    )


class LandscapeInterpolant:
    """
    Bilinear interpolation of one grid metric over (log w, m).

    Gradients are central differences of the interpolant with a spacing of
    half the local cell size, clamped to the hull.
    """

    def __init__(self, grid: LandscapeGrid, metric: str = "train_loss"):
        if grid.second_axis.kind != AxisKind.MESSINESS:
            raise DomainError(f"reduced dynamics need a (w, m) grid, got second axis {grid.second_axis.kind.value}")
        self.log_w = np.log(np.asarray(grid.w_axis, dtype=np.float64))
        self.m = np.asarray(grid.second_axis.values, dtype=np.float64)
        for name, axis in (("w", self.log_w), ("m", self.m)):
            if axis.size < 2:
                raise DomainError(f"interpolation needs at least 2 points on the {name} axis")
            if np.any(np.diff(axis) <= 0):
                raise DomainError(f"{name} axis must be strictly ascending")
        self.metric = metric
        self.values = _matrix(grid, metric)
        self._interp = RegularGridInterpolator(
            (self.log_w, self.m), self.values, method="linear", bounds_error=False, fill_value=np.nan
        )

    @property
    def bounds(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """((w_min, w_max), (m_min, m_max))."""
        return (
            (math.exp(self.log_w[0]), math.exp(self.log_w[-1])),
            (float(self.m[0]), float(self.m[-1])),
        )

    def _log_w(self, w: float, m: float) -> float | None:
        """log w clamped onto the hull, or None outside it."""
        if not w > 0:
            return None
        log_w = math.log(w)
        lo, hi = self.log_w[0], self.log_w[-1]
        # exp/log round trips may land a hair outside the edge nodes
        if lo - HULL_SLACK <= log_w <= hi + HULL_SLACK and self.m[0] <= m <= self.m[-1]:
            return min(max(log_w, lo), hi)
        return None

    def contains(self, w: float, m: float) -> bool:
        return self._log_w(w, m) is not None

    def _check(self, w: float, m: float) -> float:
        log_w = self._log_w(w, m)
        if log_w is None:
            raise OutOfBoundsError((w, m), self.bounds)
        return log_w

    def value(self, w: float, m: float) -> float:
        log_w = self._check(w, m)
        return float(self._interp([[log_w, m]])[0])

    def _half_cell(self, axis: np.ndarray, x: float) -> float:
        k = int(np.clip(np.searchsorted(axis, x, side="right") - 1, 0, axis.size - 2))
        return 0.5 * (axis[k + 1] - axis[k])

    def value_and_grad(self, w: float, m: float) -> tuple[float, float, float]:
        """(value, d/dw, d/dm) at (w, m)."""
        log_w = self._check(w, m)
        h_x = self._half_cell(self.log_w, log_w)
        h_m = self._half_cell(self.m, m)
        x_lo, x_hi = max(log_w - h_x, self.log_w[0]), min(log_w + h_x, self.log_w[-1])
        m_lo, m_hi = max(m - h_m, self.m[0]), min(m + h_m, self.m[-1])
        at = self._interp([[log_w, m], [x_hi, m], [x_lo, m], [log_w, m_hi], [log_w, m_lo]])
        d_log_w = (at[1] - at[2]) / (x_hi - x_lo)
        d_m = (at[3] - at[4]) / (m_hi - m_lo)
        return float(at[0]), float(d_log_w / w), float(d_m)


def interp_value_and_grad(grid: LandscapeGrid, point: tuple[float, float], metric: str = "train_loss") -> tuple[float, float, float]:
    """
    Interpolated value and gradient of a grid metric at (w, m).

    Raises OutOfBoundsError outside the grid hull. Build a
    LandscapeInterpolant once when querying many points.
    """
    w, m = point
    return LandscapeInterpolant(grid, metric).value_and_grad(w, m)
