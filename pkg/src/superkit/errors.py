"""Exception hierarchy shared by every superkit module."""


class SuperError(Exception):
    """Base class for all superkit errors."""


class InvalidDeclaration(SuperError):
    pass


class DuplicateName(InvalidDeclaration):
    pass


class ContextMismatch(SuperError):
    pass


class ParityViolation(SuperError):
    pass


class InvalidTarget(SuperError):
    pass


class InvalidMeasure(SuperError):
    pass


class UnsupportedArgument(SuperError):
    pass


class NonInvertible(SuperError):
    pass


class SingularBlock(NonInvertible):
    pass


class ParityUndetermined(SuperError):
    pass


class InvalidParameter(SuperError):
    pass


class UnsupportedChart(SuperError):
    pass


class DegenerateDistribution(SuperError):
    pass


class RepresentationIncompatible(SuperError):
    pass


class BracketVerificationFailure(SuperError):
    def __init__(self, pair, expected, actual):
        self.pair = pair
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"bracket {pair[0]},{pair[1]}: expected {expected}, got {actual}")


class BasisExtractionFailure(SuperError):
    pass


class NotAuxiliary(SuperError):
    pass


class CBHOrderUnsupported(SuperError):
    pass
