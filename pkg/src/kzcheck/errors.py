class KZError(Exception):
    """Base class for all errors raised by kzcheck."""


class ConfigurationError(KZError, ValueError):
    pass


class WeightMismatchError(KZError, ValueError):
    pass


class FormatError(KZError, ValueError):
    """Malformed q-expansion text."""


class PrecisionError(KZError, ValueError):
    """Not enough coefficients (or quadrature budget) for the requested accuracy."""


class UnderdeterminedError(PrecisionError):
    pass


class InsufficientCoefficientsError(PrecisionError):
    pass


class PreconditionError(KZError, ValueError):
    pass
