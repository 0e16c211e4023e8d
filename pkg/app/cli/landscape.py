"""
`groklab landscape`: reduced curves over alpha and grids over (w, N) or (w, m).
"""

import logging
from pathlib import Path

import click
from rich.table import Table

from app.core.config import Config
from app.core.exceptions import DomainError
from app.pydantic_models.experiment import ExperimentConfig
from app.pydantic_models.landscape import LandscapeGrid, ReducedCurve, SphereMinConfig
from app.services.experiments.build import build_task, mnist_source
from app.services.landscape import (
    critical_data_size,
    reduced_curve_1d,
    reduced_grid,
    shape_metrics,
    standard_norm,
)
from app.services.landscape.shape import MIN_SHAPE_POINTS
from app.services.persistence.grids import save_grid
from app.services.tasks.families import (
    AdditionMessinessFamily,
    MnistDataSizeFamily,
    MnistMessinessFamily,
    TaskFamily,
    TeacherStudentDataSizeFamily,
)
from app.utils.constants import DEFAULT_ALPHA_GRID, ExitCode, TaskKind

from .common import TASK_CHOICE, console, experiment_config, parse_floats, print_header, settings_table

logger = logging.getLogger(__name__)

AXES = ("alpha", "wN", "wm")


def sphere_config(config: Config, overrides: dict) -> SphereMinConfig:
    """[landscape] defaults from TOML, then the explicit flags."""
    section = config.section("landscape")
    values = {
        "steps": section.get("sphere_steps"),
        "lr": section.get("sphere_lr"),
        "optimizer": section.get("optimizer"),
        "restarts": section.get("restarts"),
        "check_every": section.get("check_every"),
        "workers": config.workers,
    }
    values.update(overrides)
    return SphereMinConfig.model_validate({k: v for k, v in values.items() if v is not None})


def grid_family(axis: str, experiment: ExperimentConfig) -> TaskFamily:
    if axis == "wN":
        if experiment.task == TaskKind.TEACHER_STUDENT:
            return TeacherStudentDataSizeFamily(experiment.seed, experiment.n_test, experiment.theta)
        if experiment.task == TaskKind.MNIST:
            return MnistDataSizeFamily(mnist_source(experiment), experiment.seed)
        raise DomainError("the (w, N) axis needs --task teacher_student or mnist")
    if experiment.task == TaskKind.ADDITION:
        return AdditionMessinessFamily(experiment.p, experiment.n_train or 45, experiment.seed)
    if experiment.task == TaskKind.MNIST:
        return MnistMessinessFamily(mnist_source(experiment))
    raise DomainError("the (w, m) axis needs --task addition or mnist")


def curve_table(curve: ReducedCurve) -> Table:
    table = Table(title="Reduced curve", show_header=True, header_style="bold cyan")
    for column in ("alpha", "train loss", "test loss", "train err", "test err"):
        table.add_column(column, justify="right")
    for point in curve.points:
        if point.failed:
            table.add_row(f"{point.alpha:g}", *(["[red]failed[/red]"] * 4))
            continue
        table.add_row(
            f"{point.alpha:g}",
            f"{point.train_loss:.4g}",
            f"{point.test_loss:.4g}",
            f"{point.train_err:.3f}",
            f"{point.test_err:.3f}",
        )
    return table


def grid_table(grid: LandscapeGrid) -> Table:
    rows, cols = grid.shape
    table = Table(title="Reduced grid", show_header=False, box=None, padding=(0, 2))
    table.add_column("Metric", style="bold yellow")
    table.add_column("Value", style="green")
    table.add_row("cells", f"{rows} w x {cols} {grid.second_axis.kind.value}")
    table.add_row("failed cells", str(sum(map(sum, grid.failed))))
    cells = [
        (grid.test_loss[i][j], grid.w_axis[i], grid.second_axis.values[j])
        for i in range(rows)
        for j in range(cols)
        if grid.test_loss[i][j] is not None
    ]
    if cells:
        loss, w, value = min(cells)
        table.add_row("best test loss", f"{loss:.4g} at w={w:.4g}, {grid.second_axis.kind.value}={value:g}")
    return table


@click.command("landscape")
@click.option("--task", type=TASK_CHOICE, required=True)
@click.option("--axis", type=click.Choice(AXES), default="alpha", show_default=True)
@click.option("--alpha-grid", help="Alpha values of a reduced curve, e.g. 0.25,0.5,1 or 0.25:4:9:log")
@click.option("--w-grid", default="0.25:4:9:log", show_default=True, help="Grid norms as multiples of w0")
@click.option("--n-grid", help="Training-set sizes of a (w, N) grid")
@click.option("--m-grid", default="0:1:6", show_default=True, help="Messiness values of a (w, m) grid")
@click.option("--sphere-steps", type=click.IntRange(min=1), help="Optimizer steps per cell")
@click.option("--sphere-lr", type=click.FloatRange(min=0, min_open=True))
@click.option("--restarts", type=click.IntRange(min=1))
@click.option("--workers", type=click.IntRange(min=1), help="Process-pool size")
@click.option("--seed", type=int)
@click.option("--p", type=click.IntRange(min=1))
@click.option("--n-train", type=click.IntRange(min=1))
@click.option("--n-test", type=click.IntRange(min=1))
@click.option("--theta", type=click.FloatRange(min=0, min_open=True))
@click.option("--mnist-dir", type=click.Path(path_type=Path))
@click.option("--loss", type=click.Choice(["mse", "ce", "cross_entropy"]))
@click.option("--tau", type=click.FloatRange(min=0), help="Test-error threshold for the critical data size")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Curve or grid JSON")
@click.pass_obj
def landscape_command(
    config: Config,
    axis: str,
    alpha_grid: str | None,
    w_grid: str,
    n_grid: str | None,
    m_grid: str,
    sphere_steps: int | None,
    sphere_lr: float | None,
    restarts: int | None,
    workers: int | None,
    tau: float | None,
    out: Path,
    **flags,
) -> int:
    """Compute a reduced loss landscape by constrained minimisation."""
    experiment = experiment_config(config, flags)
    cfg = sphere_config(config, {
        "steps": sphere_steps, "lr": sphere_lr, "restarts": restarts,
        "workers": workers, "seed": experiment.seed,
    })
    print_header(f"LANDSCAPE {experiment.task.value.upper()} ({axis})")
    console.print(settings_table({
        "sphere steps": cfg.steps, "sphere lr": cfg.lr, "restarts": cfg.restarts,
        "workers": cfg.workers, "seed": cfg.seed,
    }))

    if axis == "alpha":
        task = build_task(experiment)
        spec = task.spec(experiment.loss, experiment.widths)
        alphas = parse_floats(alpha_grid, "--alpha-grid") or list(DEFAULT_ALPHA_GRID)
        curve = reduced_curve_1d(task, spec, alphas, cfg)
        save_grid(curve, out)
        console.print(curve_table(curve))
        if len(curve.valid_points()) >= MIN_SHAPE_POINTS:
            metrics = shape_metrics(curve)
            console.print(settings_table({
                "argmin alpha (test)": metrics.argmin_alpha,
                "L-shaped train": metrics.is_L,
                "U-shaped test": metrics.is_U,
                "mismatch region": metrics.mismatch_region,
            }))
    else:
        if axis == "wN":
            second = parse_floats(n_grid, "--n-grid")
            if not second:
                raise click.UsageError("the (w, N) axis needs --n-grid")
        else:
            second = parse_floats(m_grid, "--m-grid")
        family = grid_family(axis, experiment)
        spec = family.build(second[0]).spec(experiment.loss, experiment.widths)
        w0 = standard_norm(spec, cfg.seed)
        multiples = parse_floats(w_grid, "--w-grid")
        grid = reduced_grid(family, spec, [alpha * w0 for alpha in multiples], second, cfg)
        save_grid(grid, out)
        console.print(grid_table(grid))
        if axis == "wN" and tau is not None:
            console.print(f"Critical data size at test error <= {tau}: {critical_data_size(grid, tau)}")

    console.print(f"Landscape written to [bold]{out}[/bold]")
    return ExitCode.OK
