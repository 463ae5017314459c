"""
Exception hierarchy for the laboratory.

Library code raises; only the command-line layer turns these into exit codes.
"""

from typing import Optional


class LabError(Exception):
    """Root of every error raised by tstruct_lab."""


class DomainError(LabError, ValueError):
    """An input violates a precondition of a mathematical operation."""


class NotAComplexError(DomainError):
    """A composite of consecutive differentials is nonzero."""


class StabilizationError(DomainError):
    """A finite tower did not stabilize within the supplied window."""


class PreconditionError(DomainError):
    """An operation was called on an object outside its admissible class."""


class ParseError(LabError):
    """A JSON document could not be turned into a typed value."""

    def __init__(self, message: str, pointer: Optional[str] = None):
        self.pointer = pointer or ""
        location = f" at {self.pointer}" if self.pointer else ""
        super().__init__(f"{message}{location}")


class VerificationError(LabError):
    """An internal cross-check failed. Indicates a bug, never bad input."""


class OracleDisagreement(VerificationError):
    """Independent membership oracles returned different verdicts."""
