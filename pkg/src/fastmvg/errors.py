"""Exception types shared across the package."""


class FastmvgError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(FastmvgError, ValueError):
    """Operands have incompatible shapes."""


class NotPositiveDefinite(FastmvgError, ArithmeticError):
    """A matrix required to be SPD failed factorization or has a
    pivot below the numerical-singularity threshold."""


class InvalidParameter(FastmvgError, ValueError):
    """A distribution parameter is outside its valid range."""


class ConfigError(FastmvgError, ValueError):
    """A chain or experiment configuration is internally inconsistent."""
