"""
`groklab train`: one training run written as CSV or JSON records.
"""

import logging
from pathlib import Path

import click

from app.services.experiments.training import run_training
from app.services.persistence.records import write_records
from app.utils.constants import ExitCode, RunStatus

from .common import console, experiment_config, print_header, records_summary, settings_table, train_options

logger = logging.getLogger(__name__)


@click.command("train")
@train_options
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Records file (.csv or .json)")
@click.pass_obj
def train_command(config, out: Path, **flags) -> int:
    """Train one network and log its learning curves."""
    experiment = experiment_config(config, flags)
    print_header(f"TRAIN {experiment.task.value.upper()}")
    console.print(settings_table({
        "alpha": experiment.alpha,
        "optimizer": experiment.optimizer.value,
        "lr": experiment.lr,
        "weight decay": experiment.weight_decay,
        "steps": experiment.steps,
        "constrained": experiment.is_constrained,
        "seed": experiment.seed,
    }))

    records = run_training(experiment)
    write_records(records, out)
    console.print(records_summary(records))
    console.print(f"Records written to [bold]{out}[/bold]")
    if records.status == RunStatus.DIVERGED:
        console.print(f"[bold red]Run diverged at step {records.meta.get('diverged_step')}[/bold red]")
        return ExitCode.DIVERGED
    return ExitCode.OK
