"""
Exception hierarchy for infoplan.

Every error subclasses InfoPlanError and the closest builtin, so callers can
catch either the library base class or e.g. ValueError.
"""


class InfoPlanError(Exception):
    """Base class for all library errors."""


class ConfigError(InfoPlanError, ValueError):
    """Invalid configuration value or file."""


class GenerationExhausted(InfoPlanError, RuntimeError):
    """Rejection sampling ran out of attempts."""

    def __init__(self, message, attempts=None):
        super().__init__(message)
        self.attempts = attempts


class InvalidPosition(InfoPlanError, ValueError):
    """A position that must lie in free space does not."""


class OutOfBounds(InvalidPosition):
    pass


class InObstacle(InvalidPosition):
    pass


class ShapeMismatch(InfoPlanError, ValueError):
    """Two grids that must share a shape do not."""


class InvalidConstraint(InfoPlanError, ValueError):
    """A linear constraint with a non-unit normal."""


class PlannerError(InfoPlanError, RuntimeError):
    """A planner could not produce a recommendation."""


class NoFeasiblePrimitive(PlannerError):
    """Every motion primitive from the root pose collides."""
