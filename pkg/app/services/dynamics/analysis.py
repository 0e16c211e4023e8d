"""
Measurements on reduced trajectories.
"""

from collections.abc import Sequence

import numpy as np

from app.core.exceptions import DomainError
from app.pydantic_models.dynamics import ReducedTrajectory

from .interpolate import LandscapeInterpolant


def log_w_speed(trajectory: ReducedTrajectory, t_start: float = 0.0, t_end: float | None = None) -> float:
    """Least-squares d(log w)/dt over samples with t_start <= t <= t_end."""
    t_end = trajectory.final.t if t_end is None else t_end
    window = [s for s in trajectory.samples if t_start <= s.t <= t_end]
    if len(window) < 2:
        raise DomainError(f"need at least 2 samples in [{t_start}, {t_end}], got {len(window)}")
    ts = np.array([s.t for s in window])
    log_ws = np.log([s.w for s in window])
    return float(np.polyfit(ts, log_ws, 1)[0])


def plateau_mask(trajectory: ReducedTrajectory, interp: LandscapeInterpolant, grad_tol: float = 1e-6) -> list[bool]:
    """True for samples where the train-loss gradient norm is below grad_tol."""
    mask = []
    for s in trajectory.samples:
        _, grad_w, grad_m = interp.value_and_grad(s.w, s.m)
        mask.append(float(np.hypot(grad_w, grad_m)) < grad_tol)
    return mask


def plateau_segment(trajectory: ReducedTrajectory, interp: LandscapeInterpolant, grad_tol: float = 1e-6) -> tuple[float, float] | None:
    """(t_start, t_end) of the longest run of plateau samples, or None."""
    mask = plateau_mask(trajectory, interp, grad_tol)
    best: tuple[int, int] | None = None
    start = None
    for k, flat in enumerate(mask + [False]):
        if flat and start is None:
            start = k
        elif not flat and start is not None:
            if best is None or k - start > best[1] - best[0] + 1:
                best = (start, k - 1)
            start = None
    if best is None or best[0] == best[1]:
        return None
    return trajectory.samples[best[0]].t, trajectory.samples[best[1]].t


def count_descents(series: Sequence[float | None], min_drop: float = 1e-3) -> int:
    """
    Number of separate descents in a series.

    A descent is a fall of more than min_drop; a new descent only counts
    after a rise of more than min_drop since the previous one. None entries
    are skipped.
    """
    values = [v for v in series if v is not None and np.isfinite(v)]
    if not values:
        return 0
    descents = 0
    direction = None
    ref = values[0]
    for value in values[1:]:
        if direction != "down" and value < ref - min_drop:
            descents += 1
            direction, ref = "down", value
        elif direction != "up" and value > ref + min_drop:
            direction, ref = "up", value
        elif (direction == "down" and value < ref) or (direction == "up" and value > ref):
            ref = value
    return descents
