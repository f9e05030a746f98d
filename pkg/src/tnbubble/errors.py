"""Exception types shared across the package."""


class GuardError(RuntimeError):
    """A resource guard (enumeration or amplitude limit) was exceeded."""


class NetworkFormatError(ValueError):
    """A JSON input file was rejected; the message carries the position."""


class NumericError(ArithmeticError):
    """A numeric precondition failed, e.g. embedding a zero operator."""
