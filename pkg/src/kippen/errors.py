"""Exception hierarchy shared by the kippen modules."""


class KippenError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(KippenError, ValueError):
    pass


class NoConvergence(KippenError, RuntimeError):
    pass


class InvalidSpec(KippenError, ValueError):
    pass


class InvalidRank(KippenError, ValueError):
    pass


class InvalidK(KippenError, ValueError):
    pass


class NotTriangular(KippenError, ValueError):
    pass


class ReducibleInput(KippenError, ValueError):
    pass


class GridUnstable(KippenError, RuntimeError):
    """A grid-based verdict changed when the grid was refined to 2m."""
