"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A parameter set that cannot be realized (bad scenario key, filter design, ...)."""


class CollisionError(ValueError):
    """Two PT-RS allocations overlap.

    Carries the offending resource elements in ``res`` as a sorted list of
    (subcarrier, symbol) tuples.
    """

    def __init__(self, message: str, res):
        super().__init__(message)
        self.res = sorted(res)


class EstimationError(ValueError):
    """CPE estimation is impossible with the given inputs (e.g. no pilots)."""
