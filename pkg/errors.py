"""Exception hierarchy shared by every engine and the CLI exit codes."""

from typing import Optional

from pydantic import ValidationError


class RacLabError(Exception):
    """Base class for all errors raised by rac-lab."""

    exit_code: int = 1


class ContractViolation(RacLabError, ValueError):
    """An operation was called outside its documented preconditions."""

    exit_code = 2


class ConvergenceError(RacLabError):
    """An iterative method hit its iteration cap."""

    def __init__(self, message: str, last_gap: Optional[float] = None, iterations: Optional[int] = None):
        super().__init__(message)
        self.last_gap = last_gap
        self.iterations = iterations


class ConsistencyError(RacLabError):
    """Two independent evaluations of the same quantity disagree."""


class WorkCapExceeded(RacLabError):
    """An exhaustive search was refused because its work estimate is too large."""

    exit_code = 3

    def __init__(self, message: str, estimate: float, cap: float):
        super().__init__(message)
        self.estimate = estimate
        self.cap = cap


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit code."""
    if isinstance(error, RacLabError):
        return error.exit_code
    if isinstance(error, ValidationError):
        return ContractViolation.exit_code
    return 1
