"""Exception hierarchy shared by all modules."""


class CmeigError(Exception):
    """Base class for errors raised by this package."""


class DomainError(CmeigError, ValueError):
    """Parameters outside the admissible range."""


class PoleError(CmeigError, ArithmeticError):
    """A denominator factor vanished within tolerance."""


class PreconditionError(CmeigError, ValueError):
    """Inputs violate an operation's precondition (separation, resonance, ...)."""


class AccuracyError(CmeigError, ArithmeticError):
    """A quadrature error estimate exceeded its target."""


class ConfigError(CmeigError, ValueError):
    """Invalid run configuration."""


class CalibrationError(CmeigError, ArithmeticError):
    """No candidate convention makes quadrature and closed form proportional."""
