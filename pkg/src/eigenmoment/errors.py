"""Exception hierarchy.

Everything raised on purpose derives from :class:`EigenmomentError`, so callers
can catch the whole family at once.  The CLI maps :class:`InfeasibleHypothesis`
to exit status 2 and every other member to status 1.
"""


class EigenmomentError(Exception):
    pass


class NonPositiveRadius(EigenmomentError, ValueError):
    pass


class InvalidGrid(EigenmomentError, ValueError):
    pass


class InvalidWarping(EigenmomentError, ValueError):
    pass


class InvalidBounds(EigenmomentError, ValueError):
    pass


class OutOfDomain(EigenmomentError, ValueError):
    pass


class NotMonotone(EigenmomentError, ValueError):
    pass


class OutOfRange(EigenmomentError, ValueError):
    pass


class IndexOutOfRange(EigenmomentError, IndexError):
    pass


class NonFiniteIteration(EigenmomentError, ArithmeticError):
    pass


class MonotonicityViolation(EigenmomentError, ArithmeticError):
    """The lower/upper quotient sequences broke their ordering beyond round-off."""


class NotConverged(EigenmomentError):
    """Raised when the sandwich did not close; ``estimate`` holds the partial result."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class InsufficientDepth(EigenmomentError, ValueError):
    pass


class OdeBlowup(EigenmomentError, ArithmeticError):
    pass


class NonSmoothBounds(EigenmomentError, ValueError):
    pass


class PreconditionError(EigenmomentError, ValueError):
    pass


class InfeasibleHypothesis(EigenmomentError):
    """A comparison theorem's hypothesis fails for the given data."""


class PositiveCurvature(InfeasibleHypothesis, ValueError):
    pass


class NotComparable(InfeasibleHypothesis, ValueError):
    pass
