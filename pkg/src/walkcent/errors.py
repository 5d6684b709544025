"""Exception types raised across the package."""


class WalkcentError(Exception):
    pass


class GraphFormatError(WalkcentError, ValueError):
    """Bad edge-list or graph6 input. ``line`` is 1-based when known."""

    def __init__(self, msg, line=None):
        self.line = line
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)


class BudgetExceeded(WalkcentError):
    pass


class SingularMatrixError(WalkcentError, ZeroDivisionError):
    pass


class NonRealSpectrumError(WalkcentError):
    pass


class DisconnectedGraphError(WalkcentError):
    pass


class ParameterError(WalkcentError, ValueError):
    pass


class PrecisionError(WalkcentError):
    """The requested computation needs more working digits."""


class ClusterCollisionError(PrecisionError):
    pass


class DegenerateDiffError(WalkcentError, ValueError):
    pass


class SpuriousRootError(PrecisionError):
    """A sign change that disappears at higher precision."""
