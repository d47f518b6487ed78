"""Exception types raised by spincat."""


class SpinCatError(Exception):
    """Base class for all spincat errors."""


class DomainError(SpinCatError, ValueError):
    """A parameter lies outside the domain of the model (e.g. theta not in [0, pi])."""


class ValidationError(SpinCatError, ValueError):
    """Input data violates a structural requirement (normalization, dimensions)."""


class DimensionMismatchError(ValidationError):
    """Two objects were built for different spin dimensions."""


class OutcomeImpossibleError(SpinCatError):
    """A requested measurement outcome has (numerically) zero probability."""

    def __init__(self, two_m, probability):
        super().__init__(f"outcome two_m={two_m} has probability {probability:.3e}")
        self.two_m = two_m
        self.probability = probability


class NumericalConsistencyError(SpinCatError, ArithmeticError):
    """A computed quantity left its physical range by more than roundoff."""


class CostGuardError(SpinCatError):
    """A brute-force computation was requested beyond its size limit."""
