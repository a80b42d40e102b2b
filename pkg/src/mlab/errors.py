"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class CapacityError(RuntimeError):
    """Request exceeds a configured size or integer-width limit."""


class SingularityError(DomainError):
    """Evaluation requested at (or too close to) a pole or singular factor."""
