"""Exception types shared across the toolkit."""


class PackBoundsError(Exception):
    """Base class for toolkit-specific failures."""


class ConfigError(PackBoundsError, ValueError):
    """Invalid experiment configuration or input argument."""


class ResolutionTooCoarseError(PackBoundsError):
    """Grid spacing too large for the requested domain."""


class ConvergenceFailureError(PackBoundsError):
    """Eigensolver failed to reach the requested residual tolerance."""

    def __init__(self, message: str, residuals=()):
        super().__init__(message)
        self.residuals = tuple(residuals)


class SpectrumRangeError(PackBoundsError):
    """Counting query beyond the resolved part of a spectrum."""


class UnknownBodyError(ConfigError):
    """Catalog lookup with an unknown body identifier."""


class LemmaEnvelopeError(PackBoundsError):
    """Window densities violated the boundary-layer envelope."""

    def __init__(self, message: str, offending=()):
        super().__init__(message)
        self.offending = tuple(offending)
