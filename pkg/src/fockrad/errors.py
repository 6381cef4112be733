"""Exception hierarchy shared by every module.

Each class maps to one CLI exit code (see ``fockrad.cli``).
"""
from __future__ import annotations


class FockradError(Exception):
    """Base class for library errors."""


class SpecError(FockradError, ValueError):
    """A symbol or target document failed validation.

    ``field`` holds a dotted path to the offending entry.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class DomainError(FockradError, ValueError):
    """Argument outside the mathematical domain of a function."""


class RangeError(FockradError, IndexError):
    """A sequence was queried beyond its prefix and has no rule."""


class AccuracyError(FockradError, ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    The best available estimate and its error are attached so callers
    can decide whether to use them anyway.
    """

    def __init__(self, message: str, value=None, err: float | None = None):
        super().__init__(message)
        self.value = value
        self.err = err


class DivergenceError(AccuracyError):
    """The defining integral does not converge (growth too fast)."""


class GrowthError(AccuracyError):
    """An average B_j of a symbol could not be evaluated reliably."""


class InfeasibleError(FockradError):
    """The approximation pipeline cannot run with the given configuration."""


class AliasingError(InfeasibleError):
    pass


class AmplificationError(InfeasibleError):
    pass


class ConditioningError(InfeasibleError):
    pass


class ClosedFormFallback(UserWarning):
    """Emitted when a closed form is replaced by quadrature."""
