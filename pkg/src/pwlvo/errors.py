"""Exception types raised by the library."""


class PwlvoError(Exception):
    """Base class for all library errors."""


class ZeroRow(PwlvoError, ValueError):
    pass


class WholeSpaceCone(PwlvoError, ValueError):
    pass


class EmptyFeasible(PwlvoError):
    pass


class ConsolidationFailed(PwlvoError):
    """A K-convex problem produced a non-convex ``f(D) + K``; indicates a bug."""


class AllEmpty(PwlvoError):
    pass


class EmptyInterior(PwlvoError):
    pass


class HasStrictRows(PwlvoError, ValueError):
    pass


class NotFeasible(PwlvoError, ValueError):
    pass


class ProblemFormatError(PwlvoError, ValueError):
    pass


class LimitExceeded(PwlvoError):
    pass
