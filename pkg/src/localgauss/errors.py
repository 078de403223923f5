"""Exception hierarchy.

Every domain error derives from :class:`LocalFieldError`, which the CLI maps to
exit code 2. :class:`ParseError` is separate and maps to exit code 1.
"""


class LocalFieldError(ValueError):
    """Base class for domain errors."""


class NotPrime(LocalFieldError):
    pass


class NegativeValuation(LocalFieldError):
    pass


class ZeroInput(LocalFieldError):
    pass


class NormNotOne(LocalFieldError):
    pass


class ZeroVector(LocalFieldError):
    pass


class DependentInput(LocalFieldError):
    pass


class NotFullRank(LocalFieldError):
    pass


class DimensionMismatch(LocalFieldError):
    pass


class EmptyData(LocalFieldError):
    pass


class BadSubset(LocalFieldError):
    pass


class TooLarge(LocalFieldError):
    pass


class WrongDimension(LocalFieldError):
    pass


class NonStabilizing(LocalFieldError):
    pass


class PrecisionTooLow(LocalFieldError):
    pass


class ParseError(ValueError):
    """Malformed input text. ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)
