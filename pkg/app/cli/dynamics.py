"""
`groklab dynamics`: integrate the reduced (w, m) flow on a saved grid.
"""

import logging
from pathlib import Path

import click

from app.core.config import Config
from app.pydantic_models.dynamics import DynamicsConfig
from app.services.dynamics import count_descents, integrate_reduced, log_w_speed
from app.services.persistence.grids import load_grid
from app.services.persistence.trajectories import write_trajectory
from app.utils.constants import ExitCode

from .common import console, print_header, settings_table

logger = logging.getLogger(__name__)


def parse_start(text: str | None, w_axis: list[float], m_axis: list[float]) -> tuple[float, float]:
    """'w,m', defaulting to the largest norm and messiness on the grid."""
    if text is None:
        return w_axis[-1], m_axis[-1]
    try:
        w, m = (float(part) for part in text.split(","))
    except ValueError as e:
        raise click.BadParameter(f"expected 'w,m', got {text!r}", param_hint="--start") from e
    return w, m


def dynamics_config(config: Config, overrides: dict) -> DynamicsConfig:
    """[dynamics] defaults from TOML, then the explicit flags."""
    section = config.section("dynamics")
    values = {
        "eta_d": section.get("eta_d"),
        "eta_r": section.get("eta_r"),
        "gamma": section.get("gamma"),
        "dt": section.get("dt"),
        "max_steps": section.get("steps"),
        "record_every": section.get("record_every"),
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return DynamicsConfig.model_validate({k: v for k, v in values.items() if v is not None})


@click.command("dynamics")
@click.option("--grid", "grid_path", type=click.Path(path_type=Path), required=True)
@click.option("--start", help="Starting point 'w,m' (default: largest w and m on the grid)")
@click.option("--eta-d", type=click.FloatRange(min=0, min_open=True), help="Decoder learning rate")
@click.option("--eta-r", type=click.FloatRange(min=0, min_open=True), help="Representation learning rate")
@click.option("--gamma", type=click.FloatRange(min=0), help="Weight decay")
@click.option("--dt", type=click.FloatRange(min=0, min_open=True))
@click.option("--steps", type=click.IntRange(min=1))
@click.option("--record-every", type=click.IntRange(min=1))
@click.option("--target-m", type=float, help="Stop once m falls to this value")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Trajectory CSV")
@click.pass_obj
def dynamics_command(
    config: Config,
    grid_path: Path,
    start: str | None,
    steps: int | None,
    out: Path,
    **flags,
) -> int:
    """Follow the reduced gradient flow across a (w, m) landscape."""
    grid = load_grid(grid_path)
    cfg = dynamics_config(config, {**flags, "max_steps": steps})
    point = parse_start(start, grid.w_axis, grid.second_axis.values)
    print_header("REDUCED DYNAMICS")
    console.print(settings_table({
        "start (w, m)": point, "eta_d": cfg.eta_d, "eta_r": cfg.eta_r,
        "gamma": cfg.gamma, "dt": cfg.dt, "max steps": cfg.max_steps,
    }))

    trajectory = integrate_reduced(grid, point, cfg)
    write_trajectory(trajectory, out)

    final = trajectory.final
    summary = {
        "status": trajectory.status.value,
        "samples": len(trajectory.samples),
        "final (t, w, m)": f"({final.t:.4g}, {final.w:.4g}, {final.m:.4g})",
        "final train loss": f"{final.train_loss:.4g}",
        "test-loss descents": count_descents(trajectory.column("test_loss")),
    }
    if len(trajectory.samples) >= 2:
        summary["mean d(log w)/dt"] = f"{log_w_speed(trajectory):.4g}"
    console.print(settings_table(summary))
    console.print(f"Trajectory written to [bold]{out}[/bold]")
    return ExitCode.OK
