"""Exception hierarchy shared by all sagsense modules."""


class SagsenseError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(SagsenseError, ValueError):
    """Argument has the wrong shape, is non-finite, or violates a precondition."""


class NoConvergence(SagsenseError, RuntimeError):
    """An iterative routine hit its iteration cap."""


class NotPositiveDefinite(SagsenseError, ValueError):
    """A matrix expected to be positive definite has an eigenvalue below the floor."""


class SingularSystem(SagsenseError, ValueError):
    """A shifted linear system is singular (zero shift on a rank-deficient matrix)."""


class BracketError(SagsenseError, ValueError):
    """Root bracket does not straddle a sign change."""


class DegenerateGeometry(SagsenseError, ValueError):
    """Two nodes coincide, so no direction can be defined."""


class ConfigError(SagsenseError, ValueError):
    """Experiment configuration failed validation.

    The offending key path (``scenario.radius`` etc.) is stored in ``key``.
    """

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
