"""Exception types shared across the package."""


class VetotalkError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(VetotalkError):
    """A vector or constraint row does not match the ambient dimension."""


class ValidationError(VetotalkError):
    """A game or strategy violates one of the model assumptions."""


class ParseError(VetotalkError):
    """A game or profile file could not be parsed."""


class RowMismatch(VetotalkError):
    """A sender strategy has the wrong number of type rows for the game."""


class DecisionOutsideX(VetotalkError):
    """A proposed decision lies outside the decision set."""


class V0TooHigh(VetotalkError):
    """The exit payoff exceeds the admissible bound min_k min_x V^k(x)."""


class EmptySubset(VetotalkError):
    """An acceptance set was requested for the empty type subset."""


class TooManyTypes(VetotalkError):
    """The type count exceeds the enumeration cap of the operation."""


class MessageUndefined(VetotalkError):
    """The receiver strategy misses a message the checker must evaluate."""


class NotAnEquilibrium(VetotalkError):
    """The supplied profile fails the limit-game equilibrium check."""


class NoPartitionalEquilibrium(VetotalkError):
    """No partition of the type set yields an equilibrium."""


class WrongTypeCount(VetotalkError):
    """The constructor requires a specific number of types."""


class NotAPartition(VetotalkError):
    """The participation structure is not a partition of the type set."""


class NotOneDimensional(VetotalkError):
    """The construction requires a one-dimensional decision set."""


class NotPrivateValues(VetotalkError):
    """The construction requires a type-independent receiver utility."""


class WrongClassification(VetotalkError):
    """The participation structure has the wrong three-type classification."""


class BisectionBudgetExceeded(VetotalkError):
    """The indifference search exhausted its candidate budget."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class ConstructionError(VetotalkError):
    """A constructed profile failed its own verification (internal bug)."""
