"""Exception hierarchy shared by every nodescale module."""


class NodeScaleError(Exception):
    """Base class for all library errors."""


class UnsupportedNodeError(NodeScaleError, ValueError):
    def __init__(self, node):
        from .nodes import SUPPORTED_NM

        self.node = node
        supported = ", ".join(f"{nm:g}" for nm in SUPPORTED_NM)
        super().__init__(f"unsupported technology node {node!r} nm; supported nodes: {supported}")


class UnsupportedMetricError(NodeScaleError, ValueError):
    pass


class DataError(NodeScaleError, ValueError):
    """Malformed or inconsistent input data (CSV rows, tables, references)."""


class MissingBaselineError(DataError):
    pass


class MismatchError(DataError):
    pass


class FitError(NodeScaleError, ValueError):
    pass


class InsufficientPointsError(FitError):
    pass


class DegenerateDesignError(FitError):
    pass


class NonpositiveValueError(FitError):
    pass


class RejectedModelError(FitError):
    pass


class InfeasibleAnchorsError(FitError):
    pass

