"""
Exception hierarchy of the toolkit.

Every exception derives from :class:`RefRadiusError` and carries an
``exit_code`` used by the command-line interface. Input validation errors
also derive from :py:exc:`ValueError`, so callers catching the builtin keep
working.

=============================== =========
Exception                       Exit code
=============================== =========
:class:`ArgumentError`          3
:class:`ParseError`             4
:class:`DegenerateInputError`   5
:class:`InsufficientStatisticsError` 6
:class:`InsufficientDataError`  7
:class:`DivergenceError`        8
=============================== =========
"""

from __future__ import annotations

from pathlib import Path

EXIT_OK = 0
EXIT_IO = 9


class RefRadiusError(Exception):
    """Base class of all toolkit errors."""

    exit_code: int = 1


class ArgumentError(RefRadiusError, ValueError):
    """An argument is outside its accepted domain."""

    exit_code = 3


class ParseError(RefRadiusError, ValueError):
    """
    Malformed input text.

    Attributes
    ----------
    path : Path or None
        File being parsed, when known.
    line : int or None
        1-based line number of the offending line, when known.
    """

    exit_code = 4

    def __init__(self, message: str, path: str | Path | None = None, line: int | None = None) -> None:
        self.path = Path(path) if path is not None else None
        self.line = line
        location = ""
        if self.path is not None:
            location = f"{self.path}:{line}: " if line is not None else f"{self.path}: "
        super().__init__(f"{location}{message}")


class DegenerateInputError(RefRadiusError, ValueError):
    """The data has no spread (constant series, identical points)."""

    exit_code = 5


class InsufficientStatisticsError(RefRadiusError, ValueError):
    """Neighbour counts fell below the configured floor."""

    exit_code = 6


class InsufficientDataError(RefRadiusError, ValueError):
    """Too few usable points to fit a slope."""

    exit_code = 7


class DivergenceError(RefRadiusError, ArithmeticError):
    """A simulated trajectory left the bounded region."""

    exit_code = 8
