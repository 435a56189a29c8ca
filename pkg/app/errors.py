# app/errors.py
"""
Exception hierarchy for the torus knot library.

Two families exist. ``InvalidInput`` covers violated preconditions and maps
to CLI exit code 2. ``NumericalFailure`` covers computations that ran but
could not reach the requested accuracy and maps to exit code 3.
"""

from typing import Optional


class TorusKnotError(Exception):
    """Base class for every error raised by the library"""
    exit_code = 1


class InvalidInput(TorusKnotError):
    """A precondition of the requested operation is violated"""
    exit_code = 2


class NumericalFailure(TorusKnotError):
    """A numerical procedure failed to meet its target"""
    exit_code = 3


class NotCoprime(InvalidInput):
    """Raised when m and p share a common factor"""
    pass


class NonPositive(InvalidInput):
    """Raised when m, p or k is below 1"""
    pass


class DomainError(InvalidInput):
    """Raised when an argument is outside the function's domain"""
    pass


class PoleError(InvalidInput):
    """Raised when the torsion function is evaluated on a genuine pole"""
    pass


class IndexOutOfRange(InvalidInput):
    """Raised when a pole index is outside 1..mp-1"""
    pass


class OrderExceeded(InvalidInput):
    """Raised when a truncated series is too short for the request"""
    pass


class ZeroLeadingCoefficient(InvalidInput):
    """Raised when inverting a series that is identically zero"""
    pass


class ContourConditionViolated(InvalidInput):
    """Raised when the contour angle breaks the convergence condition"""
    pass


class DivisionNearZero(InvalidInput):
    """Raised when the unknot normalisation vanishes at the requested h"""
    pass


class InvalidParameter(InvalidInput):
    """Raised for any other out-of-range parameter"""
    pass


class ToleranceNotMet(NumericalFailure):
    """Raised when adaptive quadrature exhausts its panel budget"""

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


class NoConvergence(NumericalFailure):
    """Raised when an iterative procedure does not settle"""

    def __init__(self, message: str, estimate: Optional[complex] = None):
        super().__init__(message)
        self.estimate = estimate


class NonFiniteSample(NumericalFailure):
    """Raised when an integrand returns NaN or infinity"""
    pass


class NumericalOverflow(NumericalFailure):
    """Raised when a result leaves the floating-point range"""
    pass
