"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the physical domain of an operation."""


class ValidationError(ValueError):
    """A matrix or coefficient set fails a structural check."""


class NumericalError(RuntimeError):
    """A numerical procedure could not reach its tolerance."""
