"""
Command-line subcommands.
"""
from app.cli.degrok import degrok_command
from app.cli.dynamics import dynamics_command
from app.cli.landscape import landscape_command
from app.cli.plot import plot_command
from app.cli.sweep import sweep_command
from app.cli.train import train_command

__all__ = [
    "degrok_command",
    "dynamics_command",
    "landscape_command",
    "plot_command",
    "sweep_command",
    "train_command",
]
