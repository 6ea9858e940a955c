"""Exception types shared across the package."""


class MIWError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(MIWError, ValueError):
    """An argument violates an operation's contract."""


class BracketNotFoundError(MIWError, ArithmeticError):
    """No sign change was located within the bracket-expansion limits."""


class BisectionNotConvergedError(MIWError, ArithmeticError):
    """Bisection exhausted its step budget before reaching tolerance."""


class DegenerateConfigurationError(MIWError, ValueError):
    """Repeated (or non-decreasing) values where a strictly decreasing
    configuration is required."""


class SchemaError(MIWError, ValueError):
    """A serialized document does not match the expected schema."""


class InvariantViolationError(MIWError):
    """A structural invariant failed validation.

    ``failures`` lists the names of the violated properties.
    """

    def __init__(self, message: str, failures: list[str] | None = None):
        super().__init__(message)
        self.failures = failures or []


class MissingDependencyError(MIWError):
    """A required cached artifact is absent and solving was disallowed."""
