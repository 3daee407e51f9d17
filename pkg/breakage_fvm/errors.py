"""Exception hierarchy shared by every breakage_fvm module."""

from __future__ import annotations

from typing import Optional, Sequence


class BreakageFVMError(Exception):
    """Root of all errors raised by the package."""


class InvalidArgumentError(BreakageFVMError, ValueError):
    pass


class OutOfDomainError(BreakageFVMError, ValueError):
    pass


class StabilityUnboundedError(BreakageFVMError, ArithmeticError):
    """S(T, R) cannot be represented; shrink T or R."""


class RejectedStepError(BreakageFVMError):
    pass


class StepLimitError(RejectedStepError):
    pass


class SchemeFailureError(BreakageFVMError, ArithmeticError):
    def __init__(self, cell: int, value: float, time: float):
        self.cell = cell
        self.value = value
        self.time = time
        super().__init__(
            f"negative concentration {value:.3e} in cell {cell} at t={time:.6g}"
        )


class DegenerateConvergenceError(BreakageFVMError, ArithmeticError):
    pass


class InstanceTooLargeError(BreakageFVMError):
    pass


class ConfigError(BreakageFVMError, ValueError):
    def __init__(self, message: str, fields: Optional[Sequence[str]] = None):
        self.fields = list(fields or [])
        super().__init__(message)


class StudyError(BreakageFVMError):
    def __init__(self, cells: int, cause: BaseException):
        self.cells = cells
        super().__init__(f"study level with {cells} cells failed: {cause}")


class OracleMismatchError(BreakageFVMError, ArithmeticError):
    """The optimized rates disagree with the brute-force oracle."""
