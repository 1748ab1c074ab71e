"""Exception types shared across the kernel.

Failures split into four families: precondition violations on documented
operations (DomainError), exhausted search or certification budgets
(EnvelopeError), malformed fixture text (FixtureError), and identities that
are supposed to hold but did not (InternalInvariantError).  The CLI maps
them to exit codes 2 (fixture/usage), 3 (internal) and lets verdict
failures exit 1 without raising.
"""

from __future__ import annotations


class CycalcError(Exception):
    """Base class for every error raised by this package."""


class IncompatibleRingsError(CycalcError):
    """Two values from different rings or fields were combined."""


class DomainError(CycalcError):
    """Input violates a documented precondition of the operation."""


class EnvelopeError(CycalcError):
    """A search, factorization or saturation budget was exhausted."""


class FixtureError(CycalcError):
    """A fixture file failed to parse or resolve."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InternalInvariantError(CycalcError):
    """An identity the kernel relies on failed; indicates a bug or a bad
    certificate, never bad user input."""
