"""Exception hierarchy shared by all modules."""


class VanHoveError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(VanHoveError, ValueError):
    pass


class CutoffExceedsGridError(InvalidArgumentError):
    """The requested momentum cutoff lies above the grid's upper endpoint."""


class UnsupportedParameterError(InvalidArgumentError):
    """Parameters outside the regime with closed-form results (e.g. E0 <= 0)."""


class InvalidParamsError(InvalidArgumentError):
    """Boundary-condition parameters violating alpha*delta - beta*gamma = 1."""


class InvalidConfigError(InvalidArgumentError):
    """Invalid source configuration or run configuration.

    ``key`` carries the dotted key path of the offending entry when known.
    """

    def __init__(self, message, key=None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


class UnknownSourceError(VanHoveError, KeyError):
    pass


class NotInRangeError(VanHoveError):
    """(1, ..., 1) is not in the range of S(lambda)."""


class PreconditionError(VanHoveError):
    pass


class InternalConsistencyError(VanHoveError):
    pass


class ResourceLimitError(VanHoveError):
    pass


class InvalidOperatorError(VanHoveError):
    pass
