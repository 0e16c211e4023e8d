"""
Static SVG figures: learning curves, landscape heatmaps and reduced
trajectories over a heatmap.

Output is a self-contained SVG document built as plain markup.
"""

import logging
import math
from pathlib import Path

import numpy as np

from app.core.exceptions import DomainError
from app.pydantic_models.dynamics import ReducedTrajectory
from app.pydantic_models.experiment import RunRecords
from app.pydantic_models.landscape import LandscapeGrid, ReducedCurve
from app.services.dynamics.boundary import contour_segments
from app.utils.constants import PlotKind

logger = logging.getLogger(__name__)

WIDTH, HEIGHT = 720, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 70, 40, 50
PLOT_W, PLOT_H = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

TRAIN_COLOR = "#4e79a7"
TEST_COLOR = "#e15759"
NORM_COLOR = "#59a14f"
FAILED_COLOR = "#bbbbbb"
# viridis, sampled at five evenly spaced points
COLOR_STOPS = ["#440154", "#3b528b", "#21918c", "#5ec962", "#fde725"]


def _esc(text: str) -> str:
    return (
        (text or "")
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _color(t: float) -> str:
    """Colormap lookup for t in [0, 1]."""
    t = min(max(t, 0.0), 1.0) * (len(COLOR_STOPS) - 1)
    k = min(int(t), len(COLOR_STOPS) - 2)
    frac = t - k
    a = [int(COLOR_STOPS[k][i : i + 2], 16) for i in (1, 3, 5)]
    b = [int(COLOR_STOPS[k + 1][i : i + 2], 16) for i in (1, 3, 5)]
    return "#" + "".join(f"{round(x + frac * (y - x)):02x}" for x, y in zip(a, b))


def _document(title: str, body: list[str]) -> str:
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" role="img" aria-label="{_esc(title)}">',
            f"<title>{_esc(title)}</title>",
            '<rect width="100%" height="100%" fill="white"/>',
            f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{_esc(title)}</text>',
            *body,
            "</svg>",
        ]
    )


def _frame(x_label: str, y_label: str, x_ticks: list[tuple[float, str]], y_ticks: list[tuple[float, str]]) -> list[str]:
    """Axes box, labels and ticks; tick positions are fractions of the plot area."""
    parts = [
        f'<rect x="{LEFT}" y="{TOP}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="#333"/>',
        f'<text x="{LEFT + PLOT_W / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">{_esc(x_label)}</text>',
        f'<text x="16" y="{TOP + PLOT_H / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {TOP + PLOT_H / 2:.1f})">{_esc(y_label)}</text>',
    ]
    for frac, label in x_ticks:
        x = LEFT + frac * PLOT_W
        parts.append(f'<text x="{x:.1f}" y="{TOP + PLOT_H + 16}" text-anchor="middle" font-size="10">{_esc(label)}</text>')
    for frac, label in y_ticks:
        y = TOP + PLOT_H - frac * PLOT_H
        parts.append(f'<text x="{LEFT - 6}" y="{y + 3:.1f}" text-anchor="end" font-size="10">{_esc(label)}</text>')
    return parts


def _polyline(xs: list[float], ys: list[float], color: str, css: str, dashed: bool = False) -> str:
    points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    dash = ' stroke-dasharray="5,3"' if dashed else ""
    return f'<polyline class="{css}" points="{points}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>'


def _scale(values: list[float], lo: float, hi: float, size: float, flip: bool) -> list[float]:
    span = hi - lo if hi > lo else 1.0
    scaled = [(v - lo) / span * size for v in values]
    return [TOP + PLOT_H - s for s in scaled] if flip else [LEFT + s for s in scaled]


def _curve_series(x: list[float], series: list[tuple[str, list[float | None], str]], x_label: str, y_label: str, title: str, log_y: bool, overlay: tuple[str, list[float]] | None) -> str:
    body: list[str] = []
    finite = [v for _, values, _ in series for v in values if v is not None and (not log_y or v > 0)]
    if not finite:
        raise DomainError("nothing to plot: every series is empty")

    def transform(v: float) -> float:
        return math.log10(v) if log_y else v

    y_lo, y_hi = min(map(transform, finite)), max(map(transform, finite))
    x_lo, x_hi = min(x), max(x)
    for name, values, color in series:
        kept = [(xv, transform(v)) for xv, v in zip(x, values) if v is not None and (not log_y or v > 0)]
        xs = _scale([k[0] for k in kept], x_lo, x_hi, PLOT_W, flip=False)
        ys = _scale([k[1] for k in kept], y_lo, y_hi, PLOT_H, flip=True)
        body.append(_polyline(xs, ys, color, "series"))
    legend_y = TOP + 14
    for name, _, color in series:
        body.append(f'<text x="{LEFT + 8}" y="{legend_y}" font-size="11" fill="{color}">{_esc(name)}</text>')
        legend_y += 14
    if overlay is not None:
        name, values = overlay
        lo, hi = min(values), max(values)
        xs = _scale(x, x_lo, x_hi, PLOT_W, flip=False)
        ys = _scale(values, lo, hi, PLOT_H, flip=True)
        body.append(_polyline(xs, ys, NORM_COLOR, "overlay", dashed=True))
        body.append(f'<text x="{LEFT + PLOT_W + 6}" y="{TOP + 10}" font-size="10" fill="{NORM_COLOR}">{hi:.3g}</text>')
        body.append(f'<text x="{LEFT + PLOT_W + 6}" y="{TOP + PLOT_H}" font-size="10" fill="{NORM_COLOR}">{lo:.3g}</text>')
        body.append(f'<text x="{LEFT + 8}" y="{legend_y}" font-size="11" fill="{NORM_COLOR}">{_esc(name)}</text>')
    ticks_x = [(0.0, f"{10 ** x_lo:.3g}"), (1.0, f"{10 ** x_hi:.3g}")]
    ticks_y = [(0.0, f"{10 ** y_lo if log_y else y_lo:.3g}"), (1.0, f"{10 ** y_hi if log_y else y_hi:.3g}")]
    return _document(title, _frame(x_label, y_label, ticks_x, ticks_y) + body)


def render_curves(records: RunRecords, metric: str = "acc", norm_overlay: bool = True) -> str:
    """Train/test accuracy (or loss, log scale) against log10 step."""
    if not records.rows:
        raise DomainError("cannot plot empty run records")
    if metric not in ("acc", "loss"):
        raise DomainError(f"curves plot accuracies or losses, got {metric!r}")
    x = [math.log10(max(step, 1)) for step in records.steps]
    series = [
        (f"train {metric}", records.column(f"train_{metric}"), TRAIN_COLOR),
        (f"test {metric}", records.column(f"test_{metric}"), TEST_COLOR),
    ]
    overlay = ("weight norm", records.column("weight_norm")) if norm_overlay else None
    title = f"{records.config.task.value} run" if records.config else "training run"
    return _curve_series(x, series, "step (log)", metric, title, metric == "loss", overlay)


def render_reduced_curve(curve: ReducedCurve) -> str:
    """Reduced train/test losses against log10 alpha."""
    points = curve.valid_points()
    if not points:
        raise DomainError("cannot plot a reduced curve without valid points")
    x = [math.log10(p.alpha) for p in points]
    series = [
        ("reduced train loss", [p.train_loss for p in points], TRAIN_COLOR),
        ("reduced test loss", [p.test_loss for p in points], TEST_COLOR),
    ]
    return _curve_series(x, series, "alpha (log)", "loss", "reduced losses", True, None)


def _heatmap_body(grid: LandscapeGrid, metric: str, level: float | None) -> list[str]:
    values = np.array(
        [[np.nan if v is None else v for v in row] for row in getattr(grid, metric)], dtype=np.float64
    )
    rows, cols = values.shape
    log_scale = metric.endswith("loss")
    shown = np.log10(np.maximum(values, 1e-12)) if log_scale else values
    finite = shown[np.isfinite(shown)]
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    span = hi - lo if hi > lo else 1.0
    cell_w, cell_h = PLOT_W / cols, PLOT_H / rows

    body = []
    for i in range(rows):
        for j in range(cols):
            x = LEFT + j * cell_w
            y = TOP + PLOT_H - (i + 1) * cell_h
            failed = grid.failed[i][j] or not np.isfinite(shown[i, j])
            fill = FAILED_COLOR if failed else _color((shown[i, j] - lo) / span)
            css = "cell failed" if failed else "cell"
            body.append(
                f'<rect class="{css}" x="{x:.2f}" y="{y:.2f}" width="{cell_w:.2f}" height="{cell_h:.2f}" fill="{fill}"/>'
            )
    if level is not None:
        segments = contour_segments(values, np.arange(rows, dtype=float), np.arange(cols, dtype=float), level)
        for (i0, j0), (i1, j1) in segments:
            x0, y0 = _cell_centre(i0, j0, cell_w, cell_h)
            x1, y1 = _cell_centre(i1, j1, cell_w, cell_h)
            body.append(
                f'<line class="contour" x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" stroke="white" stroke-width="2"/>'
            )
    label = f"log10 {metric}" if log_scale else metric
    body.append(f'<text x="{LEFT + PLOT_W + 6}" y="{TOP + 10}" font-size="10">{hi:.3g}</text>')
    body.append(f'<text x="{LEFT + PLOT_W + 6}" y="{TOP + PLOT_H}" font-size="10">{lo:.3g}</text>')
    body.append(f'<text x="{LEFT + PLOT_W + 6}" y="{TOP + PLOT_H / 2:.1f}" font-size="10">{_esc(label)}</text>')
    return body


def _cell_centre(i: float, j: float, cell_w: float, cell_h: float) -> tuple[float, float]:
    """Pixel position of fractional node indices (row i along w, column j along the second axis)."""
    return LEFT + (j + 0.5) * cell_w, TOP + PLOT_H - (i + 0.5) * cell_h


def _grid_frame(grid: LandscapeGrid) -> list[str]:
    axis = grid.second_axis
    x_ticks = [(0.5 / len(axis.values), f"{axis.values[0]:g}"), (1 - 0.5 / len(axis.values), f"{axis.values[-1]:g}")]
    rows = len(grid.w_axis)
    y_ticks = [(0.5 / rows, f"{grid.w_axis[0]:.3g}"), (1 - 0.5 / rows, f"{grid.w_axis[-1]:.3g}")]
    return _frame(axis.kind.value, "w (log)", x_ticks, y_ticks)


def render_heatmap(grid: LandscapeGrid, metric: str = "test_err", level: float | None = None) -> str:
    """One colored cell per grid cell, with an optional contour at `level`."""
    if metric not in ("train_loss", "test_loss", "train_err", "test_err"):
        raise DomainError(f"unknown grid metric {metric!r}")
    body = _heatmap_body(grid, metric, level)
    return _document(f"reduced {metric} over (w, {grid.second_axis.kind.value})", _grid_frame(grid) + body)


def render_trajectory(trajectory: ReducedTrajectory, grid: LandscapeGrid, metric: str = "train_loss", level: float | None = None) -> str:
    """Heatmap of the grid with the (m, w) path drawn over it."""
    if not trajectory.samples:
        raise DomainError("cannot plot an empty trajectory")
    body = _heatmap_body(grid, metric, level)
    log_w_axis = np.log(grid.w_axis)
    m_axis = np.asarray(grid.second_axis.values, dtype=np.float64)
    rows, cols = len(grid.w_axis), len(m_axis)
    cell_w, cell_h = PLOT_W / cols, PLOT_H / rows
    pixels = [
        _cell_centre(
            float(np.interp(math.log(s.w), log_w_axis, np.arange(rows))),
            float(np.interp(s.m, m_axis, np.arange(cols))),
            cell_w,
            cell_h,
        )
        for s in trajectory.samples
    ]
    body.append(_polyline([p[0] for p in pixels], [p[1] for p in pixels], "#ff7f0e", "trajectory"))
    start, end = pixels[0], pixels[-1]
    body.append(f'<circle class="start" cx="{start[0]:.2f}" cy="{start[1]:.2f}" r="4" fill="#ff7f0e"/>')
    body.append(f'<circle class="end" cx="{end[0]:.2f}" cy="{end[1]:.2f}" r="4" fill="white" stroke="#ff7f0e"/>')
    return _document(f"reduced trajectory ({trajectory.status.value})", _grid_frame(grid) + body)


def render_svg(
    data: RunRecords | ReducedCurve | LandscapeGrid | ReducedTrajectory,
    kind: PlotKind | str,
    path: str | Path,
    grid: LandscapeGrid | None = None,
    metric: str | None = None,
    level: float | None = None,
    norm_overlay: bool = True,
) -> Path:
    """
    Render `data` as `kind` and write the SVG to `path`.

    Args:
        data: Run records or a reduced curve (curves), a grid (heatmap) or
            a trajectory (trajectory).
        kind: curves, heatmap or trajectory.
        path: Output file.
        grid: Background grid of a trajectory plot.
        metric: "acc"/"loss" for curves, a grid metric otherwise.
        level: Contour level drawn on heatmaps.
        norm_overlay: Overlay the weight norm on run curves.
    """
    try:
        kind = PlotKind(kind)
    except ValueError as e:
        raise DomainError(f"unknown plot kind {kind!r}; expected curves, heatmap or trajectory") from e
    if kind == PlotKind.CURVES and isinstance(data, RunRecords):
        svg = render_curves(data, metric or "acc", norm_overlay)
    elif kind == PlotKind.CURVES and isinstance(data, ReducedCurve):
        svg = render_reduced_curve(data)
    elif kind == PlotKind.HEATMAP and isinstance(data, LandscapeGrid):
        svg = render_heatmap(data, metric or "test_err", level)
    elif kind == PlotKind.TRAJECTORY and isinstance(data, ReducedTrajectory):
        if grid is None:
            raise DomainError("a trajectory plot needs the landscape grid it was integrated on")
        svg = render_trajectory(data, grid, metric or "train_loss", level)
    else:
        raise DomainError(f"cannot draw {type(data).__name__} as {kind.value}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg)
    logger.info(f"Wrote {kind.value} plot to {path}")
    return path
