"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class RangeError(ValueError):
    """A requested value (measure, quantile, ...) is not attainable."""


class EmptyInterval(DomainError):
    """The set {r : |u(r)| <= r} has no nondegenerate component."""


class Divergent(ArithmeticError):
    """An improper integral diverges (for example the angle integral at the origin)."""


class NoSolution(RuntimeError):
    """A root finder could not bracket or converge to a solution."""


class Inconclusive(RuntimeError):
    """A scan grid is too coarse to bracket the quantity of interest."""


class PreconditionError(ValueError):
    """Hypotheses required by a certificate do not hold."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature could not meet its tolerance within the panel budget."""
