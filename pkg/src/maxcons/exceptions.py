"""Exception types shared across the package."""


class MaxconsError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameter(MaxconsError, ValueError):
    """A parameter is outside its documented domain."""


class ConnectivityFailure(MaxconsError, RuntimeError):
    """Random geometric graph stayed disconnected after the retry budget."""


class DimensionMismatch(MaxconsError, ValueError):
    """Array sizes do not line up with the graph."""


class EmptyInput(MaxconsError, ValueError):
    """An operation received an empty collection."""


class NonFinite(MaxconsError, ArithmeticError):
    """A NaN or infinity appeared during iteration (divergence or overflow)."""


class InsufficientSamples(MaxconsError, ValueError):
    """Too few samples for the requested neighbor count."""


class InvalidCoalition(MaxconsError, ValueError):
    """Corrupt-node set leaves no honest node or names unknown nodes."""


class ConditionViolated(MaxconsError, RuntimeError):
    """Reconstruction found an honest node whose dummy updates took the exchange branch."""

    def __init__(self, message: str, node: int | None = None, iteration: int | None = None):
        super().__init__(message)
        self.node = node
        self.iteration = iteration


class Underdetermined(MaxconsError, RuntimeError):
    """The observation set is missing values the reconstruction needs."""
