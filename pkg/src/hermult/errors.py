"""Exception hierarchy shared across the package."""


class HermultError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArityError(HermultError):
    """A multi-index or enumeration was requested with arity < 1."""


class DimensionMismatchError(HermultError):
    """Operand shapes or arities are mutually inconsistent."""


class ParityError(HermultError):
    """Index degrees violate the |k| >= |q|, |k| - |q| even constraint."""


class SizeLimitError(HermultError):
    """A requested computation exceeds the desk-scale size caps."""


class DomainError(HermultError):
    """A scalar argument is outside its admissible domain."""


class NotSymmetricError(HermultError):
    """A matrix required to be symmetric is not, beyond tolerance."""


class NotPositiveDefiniteError(HermultError):
    """A matrix required to be positive definite failed factorization."""


class SingularMatrixError(HermultError):
    """An exact inverse was requested for a singular matrix."""
