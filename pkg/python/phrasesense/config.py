"""Flat TOML configuration files: `key = value` lines named after command-line flags."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

import tomli

from phrasesense.errors import DataError, UsageError, file_errors

logger = logging.getLogger(__name__)


def read_config(path: Path) -> dict[str, Any]:
    """Read a config file; nested tables are rejected."""
    if not path.is_file():
        raise DataError(f"config file not found: {path}")
    try:
        with file_errors(path), path.open("rb") as f:
            config = tomli.load(f)
    except tomli.TOMLDecodeError as err:
        raise UsageError(f"{path}: {err}") from None

    for key, value in config.items():
        if isinstance(value, dict):
            raise UsageError(f"{path}: `{key}` must be a plain value, not a table")
    logger.info("Read %d settings from %s", len(config), path)
    return config


def resolve_path(value: str, base: Path) -> Path:
    """Resolve a configured path against the directory of the config file."""
    path = Path(value).expanduser()
    return path if path.is_absolute() else base / path
