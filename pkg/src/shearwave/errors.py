"""Exception hierarchy shared by all shearwave modules."""


class ShearwaveError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ShearwaveError, ValueError):
    """An argument lies outside the set where the quantity is defined."""


class ValidationError(DomainError):
    """Malformed input data. ``index`` points at the offending entry, if any."""

    def __init__(self, message, index=None, field=None):
        super().__init__(message)
        self.index = index
        self.field = field


class NumericError(ShearwaveError, RuntimeError):
    """A numerical procedure failed (non-finite state, bracket not found, ...)."""

    def __init__(self, message, operation=None, params=None):
        super().__init__(message)
        self.operation = operation
        self.params = dict(params or {})


class InfeasibleModeError(DomainError):
    """Requested mode wavenumber lies below the admissible range."""


class AmplitudeError(DomainError):
    """Wave amplitude would violate the no-stagnation condition."""


class SingularSymbolError(NumericError):
    """Denominator of the interface multiplier vanishes."""


class PBCViolation(DomainError):
    """The field has min h_p <= 0, so the streamline map is not invertible."""
