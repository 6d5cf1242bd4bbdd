"""Exception types shared across the package."""
from __future__ import annotations


class LinfamError(Exception):
    """Base class for all package-specific errors."""


class FieldMismatch(LinfamError, ValueError):
    """Operands belong to different finite fields."""


class DivisionByZero(LinfamError, ZeroDivisionError):
    """Division by the zero element of a field."""


class DomainError(LinfamError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ShapeMismatch(LinfamError, ValueError):
    """Matrix or function shapes are incompatible."""


class BudgetExceeded(LinfamError, RuntimeError):
    """An enumeration or search would exceed the configured budget."""


class InconsistentRestriction(LinfamError, ValueError):
    """Constraint set admits no matrix (or defines no partial map)."""


class DomainOverlap(LinfamError, ValueError):
    """New constraint domains meet the existing context non-trivially."""


class NotIndicator(LinfamError, ValueError):
    """Function was required to be {0,1}-valued but is not."""


class NotQuasiregular(LinfamError, ValueError):
    """Function or family fails the required quasiregularity hypothesis."""


class NotInKernelRelation(LinfamError, ValueError):
    """Given coefficients and matrices do not sum to zero."""


class RankNotOne(LinfamError, ValueError):
    """A matrix expected to have rank one does not."""


class HypothesisUnmet(LinfamError, ValueError):
    """A claim's numeric hypothesis fails at the given parameters."""


class StepBudgetExhausted(LinfamError, RuntimeError):
    """Iterative process hit its step budget; partial results attached.

    Attributes ``chain`` and ``family`` carry the partial output.
    """

    def __init__(self, msg: str, chain=None, family=None):
        super().__init__(msg)
        self.chain = chain
        self.family = family


class PreconditionViolated(LinfamError, ValueError):
    """Structural precondition on the inputs fails."""


class GeneratorSearchFailed(LinfamError, RuntimeError):
    """No multiplicative generator found (should not happen for true fields)."""


class NoNegativeEigenvalue(LinfamError, ValueError):
    """Ratio bound needs a negative eigenvalue and none exists."""


class ZeroFunction(LinfamError, ValueError):
    """Degree of the identically-zero function is undefined."""


class InexactComparison(LinfamError, ArithmeticError):
    """An order comparison of irrational exact values could not be settled."""
