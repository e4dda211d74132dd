# -*- coding: utf-8 -*-
"""
Custom exception hierarchy for the flipaudit pipeline.

Usage:
    from src.app.errors import SchemaError, DegenerateLabelsError

These exceptions give callers the ability to distinguish input problems
(exit code 2) from computation failures (exit code 1) without parsing
error strings.
"""

from __future__ import annotations

from typing import Iterable, Optional


class FlipauditError(Exception):
    """Base class for all flipaudit errors."""


# ---------------------------------------------------------------------------
# Input / configuration errors (exit code 2)
# ---------------------------------------------------------------------------

class InputError(FlipauditError):
    """Raised when input files or configuration are unusable."""


class SchemaError(InputError):
    """Raised when a CSV or JSON input violates its schema.

    ``row`` is the 1-based line number in the source file (header = line 1)
    or ``None`` when the problem concerns the file as a whole.
    """

    def __init__(self, message: str, source: str = "", row: Optional[int] = None) -> None:
        self.source = source
        self.row = row
        where = source
        if row is not None:
            where = f"{source} row {row}" if source else f"row {row}"
        super().__init__(f"{where}: {message}" if where else message)


class HierarchyError(InputError):
    """Raised when a label hierarchy is malformed or cyclic."""


class ConfigError(InputError):
    """Raised when a run configuration cannot be loaded or validated."""


class MissingPrerequisiteError(InputError):
    """Raised when a command needs the output of another command first."""

    def __init__(self, missing: str, command: str) -> None:
        self.missing = missing
        self.command = command
        super().__init__(
            f"missing {missing}; run `flipaudit {command}` first"
        )


# ---------------------------------------------------------------------------
# Computation errors (exit code 1)
# ---------------------------------------------------------------------------

class ComputationError(FlipauditError):
    """Base class for failures inside the statistical machinery."""


class DegenerateLabelsError(ComputationError):
    """Raised when a metric needs both classes but sees only one."""


class LengthMismatchError(ComputationError, ValueError):
    """Raised when paired per-study vectors differ in length."""


class DesignError(ComputationError):
    """Raised when a design matrix has constant non-intercept columns."""

    def __init__(self, columns: Iterable[str]) -> None:
        self.columns = tuple(columns)
        super().__init__(f"constant design columns: {', '.join(self.columns)}")


class SingularDesignError(ComputationError):
    """Raised when the information matrix is singular (collinear columns)."""

    def __init__(self, columns: Iterable[str]) -> None:
        self.columns = tuple(columns)
        super().__init__(
            f"singular information matrix; collinear columns: {', '.join(self.columns)}"
        )


class DegenerateTargetError(ComputationError):
    """Raised when a training fold has no misclassified or no correct studies."""


class BootstrapError(ComputationError):
    """Raised when a bootstrap resample stays undefined after the redraw cap."""


class FlipSearchError(ComputationError):
    """Raised when the flipping search is called with an unusable k grid."""
