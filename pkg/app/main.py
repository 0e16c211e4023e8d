"""
Command-line entry point.

Maps exceptions to exit codes: 0 success, 1 domain or configuration error,
2 I/O error, 3 diverged run.
"""
import logging
import sys

import click
from pydantic import ValidationError

from app.core.exceptions import (
    DomainError,
    GrokLabError,
    IngestionError,
    NumericError,
    RecordsParseError,
)
from app.create_app import get_app
from app.utils.constants import ExitCode

logger = logging.getLogger(__name__)


def cli(argv: list[str] | None = None, config_file: str | None = None) -> int:
    """
    Run one subcommand and return its exit code.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:]).
        config_file: Configuration file name overriding GROKLAB_ENV.
    """
    app = get_app(config_file)
    try:
        result = app.main(args=argv, prog_name="groklab", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return ExitCode.DOMAIN_ERROR
    except click.FileError as e:
        e.show()
        return ExitCode.IO_ERROR
    except click.ClickException as e:
        e.show()
        return ExitCode.DOMAIN_ERROR
    except (IngestionError, RecordsParseError, OSError) as e:
        logger.error(f"I/O error: {e}", exc_info=True)
        click.echo(f"Error: {e}", err=True)
        return ExitCode.IO_ERROR
    except (DomainError, NumericError, ValidationError, ValueError, GrokLabError) as e:
        logger.error(f"Invalid input: {e}", exc_info=True)
        click.echo(f"Error: {e}", err=True)
        return ExitCode.DOMAIN_ERROR
    if isinstance(result, int):
        return result
    return ExitCode.OK


def run() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    run()
