"""Exception types shared across the package."""


class ArbordetError(Exception):
    """Base class for every error raised by this package."""


class InputError(ArbordetError, ValueError):
    """Malformed matrix, digraph or expression input."""


class MissingSymbolError(ArbordetError, KeyError):
    """Raised by evaluation when a symbol has no assigned value."""

    def __init__(self, symbol: str):
        super().__init__(symbol)
        self.symbol = symbol

    def __str__(self) -> str:
        return f"no value assigned to symbol {self.symbol!r}"


class SizeGuardError(ArbordetError):
    """An exponential enumeration would exceed its configured cap."""


class PreconditionError(ArbordetError, ValueError):
    """An operation precondition does not hold."""
