"""Exceptions raised by phrasesense.

Every error the command line knows how to report derives from `PhraseSenseError`; the
exit code is chosen by the subclass.
"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import TextIO


class PhraseSenseError(Exception):
    """Base class for errors reported to the user without a traceback."""

    exit_code = 2


class UsageError(PhraseSenseError):
    """Bad or missing command-line arguments."""

    exit_code = 1


class DataError(PhraseSenseError):
    """An input file is missing or malformed."""

    exit_code = 2


class MalformedPhraseError(DataError, ValueError): ...


class EvaluationError(DataError): ...


class CorpusParseError(DataError):
    """The sense-tagged corpus is not well-formed XML."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class StageError(PhraseSenseError):
    """An error tagged with the pipeline stage that raised it."""

    def __init__(self, stage: str, cause: Exception | str) -> None:
        self.stage = stage
        self.cause = cause
        if isinstance(cause, PhraseSenseError):
            self.exit_code = cause.exit_code
        super().__init__(f"{stage}: {cause}")


class InvariantError(ValueError):
    """A domain value violates one of its type invariants."""


@contextmanager
def file_errors(path: Path) -> Iterator[None]:
    """Report undecodable or inaccessible files as `DataError`."""
    try:
        yield
    except UnicodeDecodeError as err:
        raise DataError(f"{path}: not valid UTF-8 (byte {err.start})") from None
    except OSError as err:
        raise DataError(f"{path}: {err.strerror or err}") from None


@contextmanager
def open_text(path: Path, mode: str = "r") -> Iterator[TextIO]:
    """Open a UTF-8 text file; writes always use `\\n` line endings."""
    newline = "\n" if "w" in mode else None
    with file_errors(path), path.open(mode, encoding="utf-8", newline=newline) as f:
        yield f
