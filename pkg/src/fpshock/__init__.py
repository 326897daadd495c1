"""Shock waves in fluid-particle flow models.

Two one-dimensional hyperbolic-parabolic systems are covered: a
Burgers-type fluid-particle model and an isentropic Euler fluid-particle
model, each with an optional particle temperature theta.  The package
computes eigenstructure and stability diagnostics, Hugoniot branches with
the Liu test, viscous shock profiles, and finite-volume evolutions.
"""

from .errors import (AdmissibilityError, ConnectionNotFound, DomainError, FPShockError,
                     NumericError, SingularStateError, ZeroAmplitudeError)
from .models import GammaLaw, Model, TabulatedLaw

__all__ = [
    "AdmissibilityError", "ConnectionNotFound", "DomainError", "FPShockError",
    "NumericError", "SingularStateError", "ZeroAmplitudeError",
    "GammaLaw", "Model", "TabulatedLaw",
]
