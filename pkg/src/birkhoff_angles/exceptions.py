"""Exception hierarchy shared by the library and the CLI."""


class BirkhoffError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(BirkhoffError, ValueError):
    """Vectors (or a vector and a norm) disagree in dimension."""


class ZeroVectorError(BirkhoffError, ValueError):
    """An operation that needs a nonzero vector received the zero vector."""


class NormSpecError(BirkhoffError, ValueError):
    """A norm-spec string could not be parsed.

    ``position`` is the 0-based character offset of the problem, or ``None``
    when the error is not tied to a location.
    """

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class InvalidParameterError(NormSpecError):
    """Syntactically valid spec whose parameters do not define a norm."""


class ConvergenceError(BirkhoffError, RuntimeError):
    """A numeric solver failed to bracket or resolve the sublevel boundary."""
