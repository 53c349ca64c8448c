"""Exception hierarchy shared by all hyperladder modules."""


class HyperladderError(Exception):
    """Base class for every error raised by the package."""


class ParameterOutOfRange(HyperladderError, ValueError):
    """Case parameters violate the admissibility constraints of their row."""


class OutsideInterval(HyperladderError, ValueError):
    pass


class NotPowerWeight(HyperladderError, ValueError):
    """The weight function of the case is not a power of sigma."""


class PoleAtNonpositiveInteger(HyperladderError, ValueError):
    pass


class NonpositiveArgument(HyperladderError, ValueError):
    pass


class DivergentSeries(HyperladderError, ArithmeticError):
    pass


class ContourFailure(HyperladderError, ArithmeticError):
    pass


class NoConvergence(HyperladderError, ArithmeticError):
    pass


class IndexBeyondLambda(HyperladderError, ValueError):
    """Requested polynomial index is not below the cap Lambda."""


class IndexOutOfRange(HyperladderError, ValueError):
    pass


class IndexMismatch(HyperladderError, ValueError):
    pass


class DivisionByZeroShift(HyperladderError, ZeroDivisionError):
    """2m + 2k + 1 vanishes, so the deformation shift is undefined."""


class NotInM(HyperladderError, ValueError):
    pass


class ChainLeavesM(HyperladderError, ValueError):
    pass


class DegenerateDenominator(HyperladderError, ZeroDivisionError):
    pass


class IndexBeyondCap(HyperladderError, ValueError):
    pass


class OutOfConvergenceDomain(HyperladderError, ValueError):
    pass


class FamilyMismatch(HyperladderError, ValueError):
    pass


class SpecMismatch(HyperladderError, ValueError):
    """A measure specification does not match the coherent family."""
