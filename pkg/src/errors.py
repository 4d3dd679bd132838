"""Exception hierarchy for toricw.

Everything raised on purpose derives from ToricWidthError, so callers can catch one
type. Numerical failures derive from NumericalError (CLI exit code 3); bad inputs
derive from DomainError, which is also a ValueError.
"""


class ToricWidthError(Exception):
    """Base class for toricw errors."""


class ConfigError(ToricWidthError):
    """Malformed configuration value (config file or environment)."""


class DomainError(ToricWidthError, ValueError):
    """Input outside the domain of an operation."""


class PoleError(DomainError):
    """Evaluation at a pole of the surface (u = 0)."""


class DegenerateOrbitError(DomainError):
    """Resonant equator: 1/c is an integer and the CZ index jumps."""


class NumericalError(ToricWidthError):
    """A numerical method failed to deliver the requested accuracy."""


class QuadratureError(NumericalError):
    """Quadrature error estimate stalled above the tolerance."""


class BracketError(NumericalError, ValueError):
    """Root bracket does not enclose a sign change."""


class PoleApproachError(NumericalError):
    """Trajectory came closer than the allowed distance to a pole."""


class NonClosureError(NumericalError):
    """Shooting for a closed geodesic did not close the orbit."""


class InconsistencyError(NumericalError):
    """A verifier or invariant gate failed."""


class IndeterminateError(ToricWidthError):
    """Discrete curvature of a boundary changes sign beyond tolerance."""


class ClassificationError(ToricWidthError):
    """Operation requires a different toric domain class."""


class HomologyError(ToricWidthError):
    """Orbit set is not nullhomologous."""


class IntegralityError(ToricWidthError):
    """ECH index evaluated to a non-integer."""
