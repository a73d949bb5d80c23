from __future__ import annotations

from .errors import DataError, PhraseSenseError, UsageError

__version__ = "0.1.0"

__all__ = ["DataError", "PhraseSenseError", "UsageError", "__version__"]
