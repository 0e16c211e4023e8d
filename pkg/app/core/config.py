#!/usr/bin/env python
"""
Configuration management.

This class loads configuration data from TOML files and provides
environment variable overrides.
"""
import logging
import logging.config
import os
import pathlib
from typing import Any

import tomli as toml
from dotenv import load_dotenv

from app.utils.constants import ConfigFile, TaskKind


class Config:
    """
    This class loads configuration data from a TOML file.

    It provides a convenient method to override settings via
    environment variables.
    """

    @classmethod
    def load_path(cls, path: pathlib.Path, **kwargs) -> dict:
        """
        Load TOML data from a file path.
        """
        text = path.read_text()
        return cls.load_string(text, **kwargs)

    @classmethod
    def load_string(cls, text: str, **kwargs) -> dict:
        """
        Load TOML data from a string.
        """
        try:
            return toml.loads(text, **kwargs)
        except Exception as e:
            logging.getLogger("groklab.config").exception(e)
            return {}

    def __init__(self, path: pathlib.Path | None, **kwargs):
        self.path = path
        self.data = self.load_path(path, **kwargs) if path else {}
        self.headings = set(self.data.keys())

    def update(self, data, sep="_", **kwargs):
        """
        Update nested configuration data from a flat dictionary.

        The separator character is used to determine the data hierarchy, eg:
        a setting called GROKLAB_MNIST_DIR will be stored as
        {"groklab": {"mnist": {"dir": ...}}}.
        """
        items = [(k, v) for k, v in data.items() if k.partition(sep)[0] in self.headings]
        items.extend(
            [
                (k.lower(), v)
                for k, v in data.items()
                if k.partition(sep)[0].lower() in self.headings
                and k.partition(sep)[0] not in self.headings
            ]
        )
        for k, v in items:
            nodes = k.split(sep)[:-1]
            leaf = k.split(sep)[-1]
            n = self.data
            for node in nodes:
                n = n.setdefault(node, {})

            try:
                n.update(toml.loads(f"{leaf} = {v}"))
            except Exception:
                n.update(toml.loads(f'{leaf} = "{v}"'))

        return self

    def configure_logging(self, table="logging"):
        """
        Configure the logging system from data.
        """
        logging.config.dictConfig(self.data.get(table, {"version": 1}))
        return self

    def section(self, *keys: str) -> dict[str, Any]:
        """
        Return a nested table, or an empty dict when any level is missing.
        """
        node: Any = self.data
        for key in keys:
            if not isinstance(node, dict):
                return {}
            node = node.get(key, {})
        return node if isinstance(node, dict) else {}

    def task_defaults(self, task: TaskKind | str) -> dict[str, Any]:
        """Per-task training defaults from the [training.<task>] table."""
        return dict(self.section("training", TaskKind.parse(task).value))

    @property
    def workers(self) -> int:
        return int(self.section("runtime").get("workers", 1))

    @property
    def mnist_dir(self) -> str | None:
        value = self.section("groklab", "mnist").get("dir") or ""
        return str(value) or None

    @property
    def mnist_test_subset(self) -> int:
        return int(self.section("groklab", "mnist").get("test_subset", 2000))


def config_file_for_environment() -> str:
    """
    Pick the configuration file from GROKLAB_ENV (development by default).
    """
    env = os.getenv("GROKLAB_ENV", "development")
    return f"{env}.toml"


def get_config(config_file: str | None = None) -> Config:
    """
    Get configuration instance for the specified environment.
    """
    load_dotenv()
    config_file = config_file or config_file_for_environment()
    config_file_path = os.path.join(
        pathlib.Path(__file__).parent.parent.absolute(), "cfg", config_file
    )
    return Config(pathlib.Path(config_file_path)).update(os.environ).configure_logging()


__all__ = ["Config", "ConfigFile", "config_file_for_environment", "get_config"]
