"""Exception types shared across the workbench."""


class LefbenchError(Exception):
    """Base class for all workbench-specific failures."""


class NonTransverse(LefbenchError):
    """An intersection configuration is degenerate: the off-diagonal Gram
    determinant vanishes (or the complement of the core has the wrong rank),
    so no local fixed-point density is defined."""


class NotConformal(LefbenchError):
    """The projection-transfer map of a plane has spread eigenvalues."""


class DegenerateProjection(LefbenchError):
    """A factor projection restricted to a plane is singular, so the
    transfer map does not exist."""


class NotCoisotropic(LefbenchError):
    """A plane does not contain its symplectic annihilator."""


class NotLagrangian(LefbenchError):
    """A subtorus direction is not Lagrangian for the standard symplectic
    form (or has the wrong dimension), so no calibration phase exists."""


class TruncationInsufficient(LefbenchError):
    """A lattice/eigenmode sum was cut off before its tail bound reached
    the requested tolerance."""


class CoarseTimeGrid(LefbenchError):
    """A short-time extrapolation grid is too ill-conditioned to trust; the
    message carries the condition estimate."""


class InfeasibleSpec(LefbenchError):
    """A random-input specification cannot be satisfied (e.g. no integer
    orthogonal matrix with the requested properties)."""


class ConfigError(LefbenchError):
    """A run configuration failed to parse or referenced an unknown check."""
