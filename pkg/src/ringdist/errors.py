"""Semantic exception hierarchy for the ringdist package."""


class RingdistError(Exception):
    """Base class for all ringdist errors."""


class ConfigurationError(RingdistError, ValueError):
    """Invalid region, scenario, or run configuration."""


class DomainError(RingdistError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConsistencyError(RingdistError):
    """An internal geometric invariant was violated (mismatched case/geometry)."""


class QuadratureError(RingdistError, ArithmeticError):
    """Adaptive quadrature did not converge within its panel budget."""


class DataError(RingdistError, ValueError):
    """Malformed or out-of-range input data."""


class FitError(RingdistError, ArithmeticError):
    """Moment matching produced an infeasible parameter set."""


class InfiniteDivergenceError(RingdistError, ArithmeticError):
    """KL divergence is infinite: the approximation vanishes where the target does not."""
