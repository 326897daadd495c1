"""Exception types shared across the package."""


class FPShockError(Exception):
    """Base class for all errors raised by fpshock."""


class DomainError(FPShockError, ValueError):
    """A state or parameter lies outside the region where a formula is defined."""


class SingularStateError(DomainError):
    """The state sits on a singularity of the model (r = 0, det D = 0, ...)."""


class AdmissibilityError(FPShockError):
    """The requested wave is inadmissible (positivity or entropy condition fails)."""


class ZeroAmplitudeError(AdmissibilityError):
    """The two end states coincide, so there is no wave to compute."""


class NumericError(FPShockError, ArithmeticError):
    """An iterative method failed to converge or a computed check failed."""


class ConnectionNotFound(NumericError):
    """Shooting from the invariant manifolds did not reach the target equilibrium."""
