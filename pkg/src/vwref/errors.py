"""Exception types raised by the engine."""


class VWRefError(Exception):
    """Base class for all engine errors."""


class UndeclaredParameter(VWRefError):
    pass


class ParameterInDenominator(VWRefError):
    """A division would put a symbolic parameter into a denominator."""


class PoleAtOne(VWRefError):
    pass


class NonNilpotent(VWRefError):
    pass


class NotInvertible(VWRefError):
    pass


class DimensionTooLarge(VWRefError):
    pass


class MixedRings(VWRefError):
    pass


class ZeroWeightDenominator(VWRefError):
    """A fixed (weight zero) direction was left in a class that must be inverted."""


class ResidualTau(VWRefError):
    """The Euler-class integral still depends on the equivariant parameter."""


class OrderTooLow(VWRefError):
    pass


class RankOrder(VWRefError):
    pass


class MissingCharge(VWRefError):
    pass


class DivisionByZeroQuantum(VWRefError):
    pass


class UnknownScenario(VWRefError):
    pass


class MissingBinding(VWRefError):
    pass


class ScenarioSchemaError(VWRefError):
    pass


class NonLineAtom(VWRefError):
    """The Euler-class oracle was handed a rank-2 atom without opting in."""


class InvalidFixedLocus(VWRefError):
    """Fixed-locus data violates a structural invariant (rank count, weights)."""
