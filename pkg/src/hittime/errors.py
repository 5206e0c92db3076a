"""Exception types shared across the package."""


class HittimeError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(HittimeError, ValueError):
    """An input has an incompatible or malformed shape."""


class ValidationError(HittimeError, ValueError):
    """An input fails a structural validity check (stochasticity, density, ...)."""


class PreconditionError(HittimeError):
    """A mathematical precondition of the requested operation does not hold."""


class OrthogonalityError(PreconditionError):
    """A state violates a support or orthogonality requirement."""


class NumericError(HittimeError):
    """A computation failed numerically (near-singular solve, inconsistency)."""


class NonConvergenceError(NumericError):
    """A truncated series or simulation cannot reach the requested accuracy."""


class ParseError(HittimeError, ValueError):
    """A specification file could not be parsed."""
