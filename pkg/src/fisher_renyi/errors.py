"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where a formula or integral is defined."""


class AccuracyError(ArithmeticError):
    """A numerical routine failed to reach its tolerance.

    The best available estimate is kept on the exception so callers can
    decide whether it is still usable.
    """

    def __init__(self, message, value=float("nan"), error=float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class BracketError(ValueError):
    """The supplied interval does not bracket a sign change."""


class CompositionError(ValueError):
    """Densities could not be combined (e.g. overlapping replica supports)."""
