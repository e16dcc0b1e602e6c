"""Exception types raised by infodistance."""


class PreconditionError(ValueError):
    """An operation's input violates a structural requirement.

    Raised for example when observables that should be jointly measurable
    do not commute, or when a matrix expected to square to the identity
    does not.
    """


class NumericalError(ArithmeticError):
    """A computed quantity failed a numerical sanity check."""


class ChainStructureError(ValueError):
    """A derivation chain references a term that was never produced."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
