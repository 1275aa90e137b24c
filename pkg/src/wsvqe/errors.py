"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class SingularMatrixError(DomainError):
    """Raised by the LU solver when a pivot is numerically zero."""


class NonFiniteObjectiveError(RuntimeError):
    """The objective returned NaN or inf; carries the offending parameters."""

    def __init__(self, params, value):
        self.params = params
        self.value = value
        super().__init__(f"objective returned {value!r} at params={list(params)!r}")
