"""Exception hierarchy shared by all laglab modules."""

from __future__ import annotations


class LaglabError(Exception):
    """Base class for all errors raised by laglab."""


class BandLimitExceeded(LaglabError):
    """A trigonometric-polynomial term carries a wavevector too large for the grid."""


class NonPositiveDensity(LaglabError):
    """The volume-form defining relation produced a non-positive density (convention bug)."""


class NotPositive(LaglabError):
    """A graph Lagrangian left the positive locus: cos(theta) <= 0 somewhere.

    Attributes
    ----------
    margin : float
        Worst-case value of cos(theta) over the grid.
    worst_point : tuple
        Base coordinates of the worst grid point.
    """

    def __init__(self, margin: float, worst_point: tuple):
        self.margin = margin
        self.worst_point = worst_point
        super().__init__(
            f"positivity violated: min cos(theta) = {margin:.6g} at x = {worst_point}"
        )


class GammaMismatch(LaglabError):
    """Tangent functions attached to different base Lagrangians were combined."""


class SingularDensity(LaglabError):
    """The pulled-back real volume density is below tolerance at some grid point."""


class InsufficientSamples(LaglabError):
    """A time-differencing stencil does not fit inside the sampled path."""


class PositivityLost(LaglabError):
    """Positivity failed during time integration.

    Attributes
    ----------
    time : float
        Integration time at which the failure occurred.
    """

    def __init__(self, time: float, message: str = ""):
        self.time = time
        super().__init__(message or f"positivity lost at t = {time:.6g}")


class StepRejected(LaglabError):
    """A single integrator step produced an energy jump above threshold."""

    def __init__(self, time: float, drift: float, threshold: float):
        self.time = time
        self.drift = drift
        self.threshold = threshold
        super().__init__(
            f"step at t = {time:.6g} rejected: relative energy jump "
            f"{drift:.3e} > {threshold:.3e}"
        )


class MarginTooSmall(LaglabError):
    """Positivity margin too small for a curvature evaluation (sec theta unbounded)."""


class DegeneratePlane(LaglabError):
    """Sectional curvature requested for a nearly degenerate tangent 2-plane."""


class ShapeMismatch(LaglabError):
    """Matrix-family operands with incompatible shapes or base weights."""


class NotPositiveDefinite(LaglabError):
    """A Hermitian matrix expected to be positive definite is not."""


class ConfigError(LaglabError):
    """Experiment configuration is malformed or inconsistent."""
