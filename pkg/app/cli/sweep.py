"""
`groklab sweep`: one run per parameter value and a power-law fit of time-to-level.
"""

import logging
from pathlib import Path

import click
from rich.table import Table

from app.core.config import Config
from app.pydantic_models.experiment import SweepResult
from app.services.experiments.sweep import sweep
from app.utils.constants import ExitCode, Metric, SweepParam

from .common import console, experiment_config, parse_floats, print_header, train_options

logger = logging.getLogger(__name__)


def sweep_table(result: SweepResult) -> Table:
    table = Table(title=f"Sweep over {result.param.value}", show_header=True, header_style="bold cyan")
    table.add_column(result.param.value, justify="right")
    table.add_column(f"steps to {result.metric.value} >= {result.level}", justify="right")
    table.add_column("status")
    for outcome in result.outcomes:
        table.add_row(f"{outcome.value:g}", "-" if outcome.time is None else str(outcome.time), outcome.status.value)
    return table


@click.command("sweep")
@train_options
@click.option("--param", type=click.Choice([p.value for p in SweepParam]), default="weight_decay", show_default=True)
@click.option("--values", "values_text", required=True, help="e.g. 0.03,0.1,0.3,1 or 0.03:1:6:log")
@click.option("--metric", type=click.Choice([m.value for m in Metric]), default="test_acc", show_default=True)
@click.option("--level", type=float, default=0.95, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), help="Process-pool size")
@click.option("--out", type=click.Path(path_type=Path), help="Sweep result JSON")
@click.pass_obj
def sweep_command(
    config: Config,
    param: str,
    values_text: str,
    metric: str,
    level: float,
    workers: int | None,
    out: Path | None,
    **flags,
) -> int:
    """Sweep one parameter and fit log time against log value."""
    base = experiment_config(config, flags)
    values = parse_floats(values_text, "--values")
    print_header(f"SWEEP {param} ({base.task.value})")

    result = sweep(base, param, values, metric, level, workers or config.workers)
    console.print(sweep_table(result))
    if result.fit is not None:
        fit = result.fit
        console.print(
            f"log t = {fit.intercept:.4g} + [bold]{fit.slope:.4g}[/bold] log {param} "
            f"(rms residual {fit.residual:.3g}, {fit.n_points} points)"
        )
    else:
        console.print(f"[yellow]Fit omitted: {result.fit_omitted_reason}[/yellow]")

    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(result.model_dump_json(indent=2))
        console.print(f"Sweep written to [bold]{out}[/bold]")
    return ExitCode.OK
