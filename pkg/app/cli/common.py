"""
Helpers shared by the command modules: rich output, list parsing, shared
training flags and the flag > --config file > TOML precedence.
"""

import logging
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click
import numpy as np
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from app.core.config import Config
from app.pydantic_models.experiment import ExperimentConfig, RunRecords
from app.services.experiments.metrics import generalization_delay, time_to_level
from app.services.persistence.records import load_json
from app.utils.constants import LossKind, Metric, OptimizerKind, TaskKind

logger = logging.getLogger(__name__)

console = Console()

TASK_CHOICE = click.Choice(
    [kind.value for kind in TaskKind] + ["teacher-student"], case_sensitive=False
)
POSITIVE = click.FloatRange(min=0, min_open=True)
NON_NEGATIVE = click.FloatRange(min=0)


def print_header(text: str, style: str = "bold cyan") -> None:
    console.print(Panel(Text(text, justify="center", style=style), border_style="cyan", padding=(0, 2)))


def settings_table(settings: dict[str, Any]) -> Table:
    table = Table(show_header=False, box=None, padding=(0, 2))
    table.add_column("Setting", style="bold yellow")
    table.add_column("Value", style="green")
    for key, value in settings.items():
        table.add_row(key, "-" if value is None else str(value))
    return table


def parse_floats(text: str | None, option: str) -> list[float] | None:
    """
    Comma-separated values, or `lo:hi:n` for n evenly spaced values.

    `lo:hi:n:log` spaces them evenly in log.
    """
    if text is None:
        return None
    try:
        if ":" in text:
            parts = text.split(":")
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            space = np.geomspace if len(parts) > 3 and parts[3] == "log" else np.linspace
            return [float(v) for v in space(lo, hi, n)]
        return [float(v) for v in text.split(",") if v.strip()]
    except (ValueError, IndexError) as e:
        raise click.BadParameter(f"cannot parse {text!r}: {e}", param_hint=option) from e


def train_options(command: Callable) -> Callable:
    """Flags shared by train, sweep and degrok; unset flags stay None."""
    options = [
        click.option("--config", "config_file", type=click.Path(path_type=Path), help="JSON ExperimentConfig"),
        click.option("--task", type=TASK_CHOICE, help="Task to train on"),
        click.option("--alpha", type=POSITIVE, help="Init scale relative to the standard draw"),
        click.option("--weight-decay", type=NON_NEGATIVE, help="Weight decay gamma"),
        click.option("--optimizer", type=click.Choice([k.value for k in OptimizerKind])),
        click.option("--lr", "--eta-d", "lr", type=POSITIVE, help="Learning rate (decoder group for addition)"),
        click.option("--eta-r", type=POSITIVE, help="Representation learning rate (addition)"),
        click.option("--steps", type=click.IntRange(min=0)),
        click.option("--batch-size", type=click.IntRange(min=0), help="0 means full batch"),
        click.option("--constrained/--no-constrained", default=None, help="Pin the norm at alpha * w0"),
        click.option("--constrained-norm", type=POSITIVE, help="Pin the norm at this value"),
        click.option("--seed", type=int),
        click.option("--p", type=click.IntRange(min=1), help="Addition base"),
        click.option("--messiness", type=click.FloatRange(0, 1), help="Addition representation messiness m"),
        click.option("--n-train", type=click.IntRange(min=1)),
        click.option("--n-test", type=click.IntRange(min=1)),
        click.option("--theta", type=POSITIVE, help="Regression accuracy threshold"),
        click.option("--mnist-dir", type=click.Path(path_type=Path), help="Directory of MNIST IDX files"),
        click.option("--loss", type=click.Choice(["mse", "ce", "cross_entropy"])),
        click.option("--log-every", type=click.IntRange(min=1)),
    ]
    for option in reversed(options):
        command = option(command)
    return command


TRAIN_FLAGS = (
    "task", "alpha", "weight_decay", "optimizer", "lr", "eta_r", "steps", "batch_size",
    "constrained", "constrained_norm", "seed", "p", "messiness", "n_train", "n_test",
    "theta", "mnist_dir", "loss", "log_every",
)


def experiment_config(config: Config, flags: dict[str, Any], task: TaskKind | None = None) -> ExperimentConfig:
    """
    Merge TOML task defaults, the --config file and explicit flags, in
    increasing precedence.
    """
    from_file: dict[str, Any] = {}
    if flags.get("config_file") is not None:
        from_file = load_json(Path(flags["config_file"]))
        if not isinstance(from_file, dict):
            raise click.BadParameter("the config file must hold a JSON object", param_hint="--config")
    explicit = {key: flags[key] for key in TRAIN_FLAGS if flags.get(key) is not None}
    if task is not None:
        explicit["task"] = task.value
    task_name = explicit.get("task") or from_file.get("task")
    if task_name is None:
        raise click.UsageError("no task given: pass --task or a --config file with a task")

    fields = ExperimentConfig.model_fields
    merged = {k: v for k, v in config.task_defaults(task_name).items() if k in fields}
    merged["test_subset"] = config.mnist_test_subset
    if config.mnist_dir:
        merged["mnist_dir"] = config.mnist_dir
    merged.update(from_file)
    merged.update(explicit)
    if isinstance(merged.get("mnist_dir"), Path):
        merged["mnist_dir"] = str(merged["mnist_dir"])
    if merged.get("loss") is not None:
        merged["loss"] = LossKind.parse(merged["loss"]).value
    return ExperimentConfig.model_validate(merged)


def records_summary(records: RunRecords, level: float = 0.95) -> Table:
    table = Table(title=f"Run ({records.status.value})", show_header=True, box=None, padding=(0, 2))
    table.add_column("Metric", style="bold cyan")
    table.add_column("Value", justify="right", style="bold green")
    if records.rows:
        final = records.final
        table.add_row("final step", str(final.step))
        table.add_row("train loss / acc", f"{final.train_loss:.4g} / {final.train_acc:.3f}")
        table.add_row("test loss / acc", f"{final.test_loss:.4g} / {final.test_acc:.3f}")
        table.add_row("weight norm (start / max / final)", (
            f"{records.rows[0].weight_norm:.4g} / {max(records.column('weight_norm')):.4g} / {final.weight_norm:.4g}"
        ))
        for metric in (Metric.TRAIN_ACC, Metric.TEST_ACC):
            table.add_row(f"steps to {metric.value} >= {level}", str(time_to_level(records, metric, level)))
        delay = generalization_delay(records, level)
        table.add_row("generalization delay", "-" if delay is None else f"{delay:.2f}x")
    table.add_row("wall time", f"{records.wall_time:.1f}s")
    return table
