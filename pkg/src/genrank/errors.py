"""Exception hierarchy shared by all genrank modules."""


class GenRankError(Exception):
    """Base class for all errors raised by genrank."""


class SizeMismatch(GenRankError, ValueError):
    pass


class NotHermitian(GenRankError, ValueError):
    pass


class ShapeMismatch(GenRankError, ValueError):
    pass


class PreconditionViolated(GenRankError, ValueError):
    pass


class DegenerateCenter(GenRankError, ArithmeticError):
    """No sufficiently generic central element was found."""


class SamplingFailure(GenRankError, RuntimeError):
    pass


class RepairFailed(GenRankError, RuntimeError):
    pass


class TooLarge(GenRankError, ValueError):
    pass


class EmptyProfile(GenRankError, ValueError):
    pass


class MissingSquareDimension(GenRankError, ValueError):
    pass


class OracleMismatch(GenRankError, AssertionError):
    """Two independent computations of the same quantity disagree."""
