"""Exception hierarchy shared by every module in the package."""


class AdspecError(Exception):
    """Base class for all package errors."""


class InvalidInputError(AdspecError, ValueError):
    """Input data are malformed (non-finite values, length mismatch, too short)."""


class InvalidParameterError(AdspecError, ValueError):
    """A tuning parameter (L, B, M, quadrature size, ...) is out of range."""


class DomainError(AdspecError, ValueError):
    """A scalar argument lies outside the domain of the function."""


class DegenerateSpectrumError(AdspecError, ArithmeticError):
    """A periodogram value used as a ratio denominator is exactly zero."""


class InstabilityError(AdspecError, ValueError):
    """An autoregressive polynomial has a root on or inside the unit circle."""


class ConsistencyError(AdspecError, RuntimeError):
    """Internal bookkeeping produced an impossible configuration."""
