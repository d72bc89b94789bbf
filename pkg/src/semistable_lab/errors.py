"""Exception types shared across the library."""


class SemistableError(Exception):
    """Base class for all library-specific errors."""


class NonInvertible(SemistableError):
    """The exponent matrix is numerically singular."""


class EigenRealPartBelowHalf(SemistableError):
    """Some eigenvalue of the exponent has real part below 1/2."""

    def __init__(self, offending):
        self.offending = list(offending)
        super().__init__(
            "eigenvalue real parts below 1/2: "
            + ", ".join(f"{z:.6g}" for z in self.offending)
        )


class ClusterAmbiguous(SemistableError):
    """Eigenvalue real parts cannot be grouped unambiguously at the given tolerance."""


class DimensionMismatch(SemistableError):
    """Vector length does not match the ambient dimension."""


class RadiusTooSmall(SemistableError):
    """Radius must exceed 1 for the asymptotic-inverse machinery."""


class RangeOverflow(SemistableError):
    """Matrix power overflowed for an extreme scale argument."""


class NotValidated(SemistableError):
    """Model must be validated before evaluation."""


class ModelNotStrict(SemistableError):
    """Operation requires a strict (symmetric, driftless) model."""


class InvalidSpectrum(SemistableError):
    """Spectrum summary is inconsistent with a full model (e.g. missing second index)."""


class Dimension1Unsupported(SemistableError):
    """No double-point formula is available in dimension one."""


class ThresholdTooSmall(SemistableError):
    """Jump threshold does not leave a finite retained atom orbit."""


class ModelSpecError(SemistableError):
    """Model specification failed to parse or validate."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
