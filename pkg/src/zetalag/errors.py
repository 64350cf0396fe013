"""Exception hierarchy shared by all zetalag modules."""


class ZetalagError(Exception):
    """Base class for all zetalag errors."""


class DomainError(ZetalagError):
    """Argument outside the mathematical domain of an operation."""


class PrecisionError(ZetalagError):
    """Requested tolerance cannot be met at the working precision."""


class ConvergenceError(ZetalagError):
    """A truncated series could not reach the requested tail bound.

    ``achieved`` carries the best tail bound that was reached before
    giving up, so callers can report it.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class CertificationError(ZetalagError):
    """Two independent computations disagree beyond their combined brackets."""


class TableDepthError(ZetalagError):
    """A precomputed table is too short for the requested index."""
