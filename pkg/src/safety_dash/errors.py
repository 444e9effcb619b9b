"""Exception types shared across the package.

DomainError carries a machine-readable ``code`` so the HTTP layer can map
every caller error to exactly one API error code.
"""

from __future__ import annotations


class SafetyDashError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SafetyDashError):
    """Malformed geometry or other structurally invalid input."""


class SchemaError(SafetyDashError):
    """Fatal input-file schema problem (e.g. a missing required column)."""

    def __init__(self, message: str, column: str | None = None):
        super().__init__(message)
        self.column = column


class ReferentialError(SafetyDashError):
    """A record references an id that no loaded region provides."""


class DomainError(SafetyDashError):
    """Caller error in a query parameter or operation precondition."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class UndefinedCorrelationError(SafetyDashError):
    """Pearson correlation is undefined (zero variance in an input vector)."""
