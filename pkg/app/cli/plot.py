"""
`groklab plot`: static SVG figures of records, grids and trajectories.
"""

import logging
from pathlib import Path

import click

from app.core.config import Config
from app.services.persistence import load_artifact, load_grid
from app.services.plotting import render_svg
from app.utils.constants import ExitCode, PlotKind

from .common import console

logger = logging.getLogger(__name__)


@click.command("plot")
@click.option("--in", "in_path", type=click.Path(path_type=Path), required=True, help="Records, grid, curve or trajectory")
@click.option("--kind", type=click.Choice([k.value for k in PlotKind]), required=True)
@click.option("--out", type=click.Path(path_type=Path), required=True, help="SVG file")
@click.option("--grid", "grid_path", type=click.Path(path_type=Path), help="Landscape grid behind a trajectory")
@click.option("--metric", help="acc/loss for curves; a grid metric for heatmaps and trajectories")
@click.option("--level", type=float, help="Contour level")
@click.option("--norm/--no-norm", "norm_overlay", default=True, help="Overlay the weight norm on run curves")
@click.pass_obj
def plot_command(
    config: Config,
    in_path: Path,
    kind: str,
    out: Path,
    grid_path: Path | None,
    metric: str | None,
    level: float | None,
    norm_overlay: bool,
) -> int:
    """Render a saved artifact as a self-contained SVG."""
    data = load_artifact(in_path)
    grid = load_grid(grid_path) if grid_path is not None else None
    render_svg(data, kind, out, grid=grid, metric=metric, level=level, norm_overlay=norm_overlay)
    console.print(f"{kind} plot written to [bold]{out}[/bold]")
    return ExitCode.OK
