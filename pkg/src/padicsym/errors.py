"""Exception types shared across the package."""


class PadicSymError(Exception):
    """Base class for all errors raised by this package."""


class MixedPrime(PadicSymError):
    """Operands live over different primes."""


class DivisionByZero(PadicSymError):
    """Division by a tracked zero."""


class NonUnit(PadicSymError):
    """A unit of Z_p was required."""


class DegreeTooLow(PadicSymError):
    """The differential operator needs positive degree in both variable pairs."""


class SmallPrime(PadicSymError):
    """Clebsch-Gordan operations need p > n so that n! is invertible."""


class NotLocallyConstant(PadicSymError):
    """A cell measure can only integrate locally constant functions exactly."""


class LevelMismatch(PadicSymError):
    """Function resolution exceeds the measure's resolution."""


class NonUnitDenominator(PadicSymError):
    """A matrix outside Sigma_0(p) produced a non-unit automorphy factor."""


class LevelExceedsPrecision(PadicSymError):
    """Group truncation level must not exceed coefficient precision."""


class RouteMismatch(PadicSymError):
    """The two evaluation routes disagree beyond the documented sign."""


class IdentityViolation(PadicSymError):
    """An unconditional identity failed; signals an implementation bug."""


class NonInvertibleEigenvalue(PadicSymError):
    """The declared eigenvalue is zero, so its inverse does not exist."""


class ProjectionMismatch(PadicSymError):
    """The projected form disagrees with the expected pattern beyond a sign."""


class FactorizationMismatch(PadicSymError):
    """Truncated series on the two sides of the factorization differ."""

    def __init__(self, message, first_diff=None):
        super().__init__(message)
        self.first_diff = first_diff


class RamifiedUnsupported(PadicSymError):
    """Local factors at ramified primes are not modeled."""


class ZeroEigenvalueProduct(PadicSymError):
    """The product of the Hecke roots vanishes."""
