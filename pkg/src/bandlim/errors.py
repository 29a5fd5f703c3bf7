"""Exception types shared across the package."""


class BandlimError(Exception):
    """Base class for library errors."""


class DomainError(BandlimError, ValueError):
    """Argument outside the domain of a function."""


class RegimeError(BandlimError, ValueError):
    """Parameters outside the validity regime of a bound."""


class EvaluationError(BandlimError, ArithmeticError):
    """An integrand or summand produced a non-finite value."""


class RangeError(BandlimError, OverflowError):
    """Intermediate values left the representable range."""


class ConvergenceError(BandlimError, RuntimeError):
    """A refinement check did not certify the result."""


class ConfigError(BandlimError, ValueError):
    """Invalid experiment configuration."""
