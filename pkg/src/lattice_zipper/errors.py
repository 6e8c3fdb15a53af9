"""Exception types shared across the package."""


class LatticeError(Exception):
    """Base class for computation errors."""


class PiOverflow(LatticeError):
    pass


class DivisorNotSupported(LatticeError):
    pass


class DivideByZero(LatticeError, ZeroDivisionError):
    pass


class RadicandMismatch(LatticeError):
    pass


class BadConstantTerm(LatticeError):
    pass


class TruncationExceeded(LatticeError):
    pass


class ParseError(LatticeError, ValueError):
    pass


class NotAnEdge(LatticeError, ValueError):
    pass


class OnSlit(LatticeError, ValueError):
    pass


class RecursionBudgetExceeded(LatticeError):
    pass


class NonRealProbability(LatticeError):
    pass


class RemovedVertex(LatticeError, ValueError):
    pass


class FillFailure(LatticeError):
    pass


class Singular(LatticeError):
    pass


class NoConvergence(LatticeError):
    pass


class ConditioningTooRare(LatticeError):
    pass
