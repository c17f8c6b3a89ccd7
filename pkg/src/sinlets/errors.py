"""Exception hierarchy shared by every module."""


class SinletError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SinletError, ValueError):
    """An argument lies outside the domain of the operation."""


class PrecisionLossError(DomainError):
    """The phase derivative underflowed; the result would be meaningless.

    This is raised deep in the tails of a Mother-Phase, where the value is
    mathematically defined but not representable in double precision.
    """


class DegenerateInputError(DomainError):
    """The input carries no information (e.g. a signal with zero energy)."""


class ParameterError(DomainError):
    """A tuning parameter is out of its admissible range."""


class UnsupportedKindError(DomainError):
    """The coefficient kind is not accepted by the operation."""


class OrderOverflowError(DomainError):
    """The requested basis order cannot be represented."""


class AliasingError(SinletError):
    """The sample grid cannot resolve the requested number of basis functions."""

    def __init__(self, message: str, max_safe: int):
        super().__init__(message)
        self.max_safe = max_safe


class IllPosedError(SinletError):
    """A least-squares system is rank deficient."""

    def __init__(self, message: str, rank: int):
        super().__init__(message)
        self.rank = rank


class FormatError(SinletError):
    """A file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
