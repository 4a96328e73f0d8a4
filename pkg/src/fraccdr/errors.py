"""Exception types shared across the solver library."""


class FracCDRError(Exception):
    """Base class for all library errors."""


class DomainError(FracCDRError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class HistoryError(FracCDRError):
    """A half-step history is missing levels required by an operation."""


class StencilRangeError(FracCDRError, IndexError):
    """A five-point stencil was applied outside j in [2, M-2]."""


class DimensionError(FracCDRError, ValueError):
    """Grid vectors with incompatible lengths were combined."""


class SingularMatrixError(FracCDRError):
    """Banded elimination hit a zero pivot after partial pivoting."""


class SolverError(FracCDRError):
    """A time step failed to solve.

    Carries the failing full-step index and, when raised by the stepper,
    the partial history computed so far.
    """

    def __init__(self, message, step_index=None, partial_history=None):
        super().__init__(message)
        self.step_index = step_index
        self.partial_history = partial_history


class OracleError(FracCDRError):
    """Quadrature oracle failed to reach the requested tolerance.

    ``achieved`` records the best relative-error estimate obtained.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ContractError(FracCDRError):
    """A caller violated an API precondition (e.g. missing exact solution)."""


class ConfigError(FracCDRError):
    """A study configuration (file or CLI) could not be interpreted."""
