"""Exception types raised across the package."""


class GeoPierceError(Exception):
    """Base class for all package errors."""


class InvalidInput(GeoPierceError, ValueError):
    """Malformed input data (shapes, non-finite values, bad radii)."""


class NotSimple(InvalidInput):
    pass


class DegenerateVertex(InvalidInput):
    pass


class EndpointOutside(GeoPierceError, ValueError):
    pass


class PointOutsidePolygon(GeoPierceError, ValueError):
    pass


class GeodesicallyCollinear(GeoPierceError, ValueError):
    pass


class NotPairwiseIntersecting(InvalidInput):
    pass


class InvariantViolation(GeoPierceError, RuntimeError):
    """An internal invariant failed; indicates a numerical or logic problem."""


class OptimizerStalled(InvariantViolation):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TangencyNotFound(InvariantViolation):
    pass


class DegenerateTangentTriangle(InvariantViolation):
    pass


class BothLarge(InvariantViolation):
    pass


class SweepDegenerate(GeoPierceError):
    """A guard sweep reached its angular limit without a stop event.

    Never raised by the pipeline; the guard falls back to the limit point and
    the sweep record carries ``degenerate=True``.
    """


class GenerationFailed(GeoPierceError, RuntimeError):
    pass


class SelfTestFailed(GeoPierceError, AssertionError):
    def __init__(self, item, message=""):
        super().__init__(f"{item}: {message}" if message else str(item))
        self.item = item
