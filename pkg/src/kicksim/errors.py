"""Exceptions raised by kicksim.

Numerical guards (``NumericalGuardError`` subclasses) signal that a
simulation left the regime where its results can be trusted; the CLI maps
them to a dedicated exit code.
"""


class KicksimError(Exception):
    """Base class for all kicksim errors."""


class NumericalGuardError(KicksimError):
    """A numerical sanity guard tripped."""


class GridTooCoarse(NumericalGuardError):
    pass


class OverlapTooLarge(NumericalGuardError):
    pass


class AliasingDetected(NumericalGuardError):
    pass


class NotFarField(NumericalGuardError):
    pass


class GridMismatch(KicksimError, ValueError):
    pass


class NotUnitary(KicksimError, ValueError):
    pass


class NotUnbiased(KicksimError, ValueError):
    pass


class InvalidDimension(KicksimError, ValueError):
    pass


class DimensionMismatch(KicksimError, ValueError):
    pass


class IndexOutOfRange(KicksimError, IndexError):
    pass


class DegenerateMomenta(KicksimError, ValueError):
    pass


class EmptyState(KicksimError, ValueError):
    pass


class IncompatibleGrids(KicksimError, ValueError):
    pass
