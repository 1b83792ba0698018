"""Exception types raised by the workbench."""


class WorkbenchError(Exception):
    """Base class for workbench failures."""


class DomainError(WorkbenchError, ValueError):
    """An input lies outside the domain an operation is defined on."""


class ConvergenceError(WorkbenchError, RuntimeError):
    """A numerical derivative failed its step-halving consistency check."""


class NumericalError(WorkbenchError, ArithmeticError):
    """An internal computation produced an unusable value."""
