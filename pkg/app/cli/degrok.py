"""
`groklab degrok`: free-norm versus pinned-norm addition runs.
"""

import logging
from pathlib import Path

import click

from app.core.config import Config
from app.services.experiments.degrok import DEGROK_ALPHA, degrok_experiment
from app.services.experiments.metrics import generalization_delay
from app.services.persistence.records import write_records
from app.utils.constants import ExitCode, RunStatus, TaskKind

from .common import console, experiment_config, print_header, records_summary, train_options

logger = logging.getLogger(__name__)


@click.command("degrok")
@train_options
@click.option("--constrained-alpha", type=click.FloatRange(min=0, min_open=True), default=DEGROK_ALPHA, show_default=True)
@click.option("--level", type=click.FloatRange(0, 1), default=0.9, show_default=True)
@click.option("--out-dir", type=click.Path(path_type=Path, file_okay=False), required=True)
@click.pass_obj
def degrok_command(config: Config, constrained_alpha: float, level: float, out_dir: Path, **flags) -> int:
    """Run the addition task twice: free norm, then norm pinned at a small alpha."""
    base = experiment_config(config, flags, task=TaskKind.ADDITION)
    print_header(f"DE-GROKKING (pinned alpha {constrained_alpha})")

    result = degrok_experiment(base, constrained_alpha)
    for name, records in (("unconstrained", result.unconstrained), ("constrained", result.constrained)):
        write_records(records, out_dir / f"{name}.csv")
        console.print(records_summary(records, level))
        delay = generalization_delay(records, level)
        console.print(f"{name}: test/train delay at {level} = {'-' if delay is None else f'{delay:.2f}x'}")

    console.print(f"Records written to [bold]{out_dir}[/bold]")
    if RunStatus.DIVERGED in (result.unconstrained.status, result.constrained.status):
        return ExitCode.DIVERGED
    return ExitCode.OK
