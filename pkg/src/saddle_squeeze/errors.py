"""Exception hierarchy shared by the numerical modules and the CLI."""


class SaddleSqueezeError(Exception):
    """Base class for all package errors."""


class DomainError(SaddleSqueezeError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(SaddleSqueezeError, ValueError):
    """A model, symbol or configuration violates its structural invariants.

    ``path`` names the offending field (dotted, e.g. ``model.omega[0]``) when
    known, so configuration errors can be reported precisely.
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class NoBottleneckError(DomainError):
    """The energy does not exceed the saddle energy E0, so the bottleneck is closed."""


class SingularDenominatorError(SaddleSqueezeError, ArithmeticError):
    """The coefficient multiplying the reactive action vanishes."""


class SeriesLimitError(SaddleSqueezeError, ArithmeticError):
    """A truncated series failed to reach its tolerance within the term cap."""


class UndefinedReferenceError(SaddleSqueezeError, ArithmeticError):
    """A ratio was requested against a reference value that is zero."""
