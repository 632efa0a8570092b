"""Exception hierarchy.

Two branches matter to callers: ``ValidationFailure`` (bad inputs, exit
code 2 in the CLI) and ``NumericalFailure`` (a computation that could not
be completed, exit code 3).
"""


class RiscapError(Exception):
    """Base class for all library errors."""


class ValidationFailure(RiscapError):
    """Invalid scenario, geometry, or parameter values."""


class NumericalFailure(RiscapError):
    """A numerical procedure failed to produce a trustworthy result."""


class GeometryError(ValidationFailure):
    """Degenerate link geometry (endpoint in or below the panel plane)."""


class SingularPattern(ValidationFailure):
    """Radiation-pattern factor is zero or negative; path loss undefined."""


class NegativeCorrelation(ValidationFailure):
    """Doppler-derived correlation fell below zero (outside the model)."""


class InvalidScenario(ValidationFailure):
    """Scenario is structurally empty (no reflecting path, no direct path)."""


class ScenarioError(ValidationFailure):
    """Scenario file failed schema validation; message carries the field path."""


class DegenerateDistribution(NumericalFailure):
    """Envelope variance too small to moment-match a Gamma distribution."""


class QuadratureFailure(NumericalFailure):
    """Adaptive quadrature did not reach the requested tolerance."""
