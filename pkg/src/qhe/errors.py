"""Exception types raised across the package."""


class QHEError(Exception):
    """Base class for all package errors."""


class InvalidSpacingError(QHEError, ValueError):
    pass


class InvalidScaleError(QHEError, ValueError):
    pass


class InvalidParameterError(QHEError, ValueError):
    pass


class InvalidTemperatureError(QHEError, ValueError):
    pass


class DimensionMismatchError(QHEError, ValueError):
    pass


class DegenerateEigenbasisError(QHEError):
    """Eigenbasis decomposition requested at a (near-)degenerate spectrum."""


class DegenerateSpacingError(QHEError, ValueError):
    """A control point produces a zero level spacing."""


class XiUndefinedError(QHEError):
    """xi needs the lower spacing to change (d1h != d1l)."""


class ThetaUndefinedError(QHEError):
    pass


class NotApplicableError(QHEError):
    """Operation is only defined for a particular case of the 3-level analysis."""


class BoundarySubcaseError(QHEError):
    pass


class MultipleRootsError(QHEError):
    """Net work changes sign more than once on the search bracket."""


class ConfigError(QHEError, ValueError):
    pass
