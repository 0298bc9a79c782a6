"""Exception types shared across the package."""


class InvalidModulusError(ValueError):
    """Raised when a modulus is not an odd prime."""


class NumericToleranceError(ArithmeticError):
    """A computed quantity failed a numerical sanity or tolerance check."""


class PreconditionError(ValueError):
    """Input violates a documented precondition."""
