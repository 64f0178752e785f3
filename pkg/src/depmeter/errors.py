"""Exception hierarchy shared across the package."""


class DepmeterError(Exception):
    """Base class for all depmeter errors."""


class ValidationError(DepmeterError):
    """Input failed a structural or numerical validity check."""


class EmptyData(ValidationError):
    """No usable observations (all-zero counts, empty sample list)."""


class ShapeError(ValidationError):
    """Dimension mismatch between arrays, supports, or chained matrices."""


class OrderingError(ValidationError):
    """A label cannot be ordered under the requested ordering policy."""


class AlphaOutOfRange(ValidationError):
    """Entropy-form order parameter outside the bounded regime (0, 2)."""


class InvalidPhi(ValidationError):
    """Supplied function failed the convexity check."""


class NeedsSamples(ValidationError):
    """Operation requires raw samples, not a pre-aggregated table."""


class InvalidN(ValidationError):
    """Circle-example size parameter must be an integer >= 2."""


class CellBudgetExceeded(ValidationError):
    """Dense tensor would exceed the configured cell budget."""
