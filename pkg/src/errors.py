from __future__ import annotations

from typing import Optional


class WorkbenchError(Exception):
    """Base class for every error the workbench raises on purpose."""

    exit_status: int = 1


class UsageError(WorkbenchError, ValueError):
    """Raised when an operation is called with arguments it cannot accept."""

    exit_status = 2


class SourceValidationError(WorkbenchError, ValueError):
    """Raised when a source document does not describe a valid joint source."""

    exit_status = 3


class SourceFormatError(SourceValidationError):
    pass


class NegativeMassError(SourceValidationError):
    pass


class MassSumError(SourceValidationError):
    def __init__(self, message: str, *, total: float) -> None:
        super().__init__(message)
        self.total = total


class OmniscientMismatchError(SourceValidationError):
    pass


class ResourceBudgetError(WorkbenchError):
    """Raised when a table or an enumeration would exceed its configured budget."""

    exit_status = 4

    def __init__(self, message: str, *, required: int, allowed: int) -> None:
        super().__init__(f"{message} (required {required}, allowed {allowed})")
        self.required = required
        self.allowed = allowed


class RangeOverflowError(WorkbenchError, OverflowError):
    """Raised when a codebook size cannot be represented."""

    exit_status = 4

    def __init__(self, message: str, *, exponent: Optional[float] = None) -> None:
        super().__init__(message)
        self.exponent = exponent
