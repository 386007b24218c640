"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for all errors raised by igwp."""


class DomainError(GeometryError):
    """A point or parameter lies outside the declared coordinate domain."""


class EvaluationError(GeometryError):
    """A field could not be evaluated (singular metric, derivative step
    leaving the chart, non-convergent quadrature)."""


class PreconditionError(GeometryError):
    """A documented precondition of an operation is violated (torsion
    present, fiber not dually flat, horizontality failure, ...)."""
