"""Exception and warning types shared across the package."""


class SchemaError(ValueError):
    """Input document is structurally malformed (CLI exit code 2)."""


class InvariantError(ValueError):
    """Input data violates a curve-configuration invariant (CLI exit code 3).

    ``invariant`` names the violated condition, e.g. ``"equal-slope"``.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


class MathAssertionError(AssertionError):
    """An internal mathematical identity failed (CLI exit code 4).

    Raised only when an identity that holds by construction is violated,
    which always indicates an implementation bug, never bad input.
    """


class NonPrimitivityWarning(UserWarning):
    """gcd proxy suggests a Mukai vector may be non-primitive."""
