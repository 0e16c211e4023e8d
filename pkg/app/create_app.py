"""
Command-line application factory.

Creates the click group and registers every subcommand on it.
"""

import logging

import click

from app.cli import (
    degrok_command,
    dynamics_command,
    landscape_command,
    plot_command,
    sweep_command,
    train_command,
)
from app.core.config import get_config


def register_commands(group: click.Group) -> None:
    """Register all subcommands."""
    group.add_command(train_command)
    group.add_command(landscape_command)
    group.add_command(dynamics_command)
    group.add_command(sweep_command)
    group.add_command(plot_command)
    group.add_command(degrok_command)


def get_app(config_file: str | None = None) -> click.Group:
    """
    Application factory function.

    Args:
        config_file: Configuration file name (e.g. "production.toml"); by
            default chosen from GROKLAB_ENV.

    Returns:
        Click group whose context object is the loaded Config.
    """

    @click.group(name="groklab", help="Loss-landscape experiments on delayed generalization.")
    @click.pass_context
    def app(ctx: click.Context) -> None:
        config = get_config(config_file)
        ctx.obj = config
        logging.getLogger(__name__).debug(f"Loaded configuration from {config.path}")

    register_commands(app)
    return app
