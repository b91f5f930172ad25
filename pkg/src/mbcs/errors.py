"""Exception types shared across the package."""


class MbcsError(ValueError):
    """Base class for all errors raised by this package."""


class DimensionError(MbcsError):
    """Matrix or index dimensions are inconsistent with the operation."""


class SizeGuardError(MbcsError):
    """Requested computation exceeds an explicit size guard."""


class SingularInputError(MbcsError):
    """Input matrix is zero (or otherwise has no usable norm)."""


class ResolutionError(MbcsError):
    """A tabulated grid is too coarse for the requested operation."""


class ValidationError(MbcsError):
    """An input value violates a documented invariant."""
