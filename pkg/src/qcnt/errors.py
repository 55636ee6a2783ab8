"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``kind`` and the process exit
code the command-line front end maps it to.
"""

from __future__ import annotations


class QcntError(Exception):
    kind = "error"
    exit_code = 1

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        out = {"error": self.kind, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


class InvalidInputError(QcntError, ValueError):
    kind = "invalid-input"
    exit_code = 2


class UnsupportedFieldError(InvalidInputError):
    kind = "unsupported-field"


class InsufficientDataError(QcntError, ValueError):
    kind = "insufficient-data"
    exit_code = 2


class DomainError(QcntError, ArithmeticError):
    """Evaluation requested at a pole or outside the supported half-plane."""

    kind = "domain"
    exit_code = 2


class CompletenessError(QcntError):
    """A truncation is too short to guarantee the requested output."""

    kind = "completeness"
    exit_code = 3


class ResourceError(QcntError):
    kind = "resource"
    exit_code = 3


class PrecisionError(QcntError):
    kind = "precision"
    exit_code = 3


class BoundaryUndecidableError(PrecisionError):
    kind = "boundary-undecidable"


class ConvergenceError(PrecisionError):
    kind = "convergence"
