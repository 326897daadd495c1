"""Fluid-particle models: pressure laws, fluxes, Jacobians, diffusion and entropy.

Two systems are provided.

* Burgers fluid-particle (m = 2): W = (rho, w), hybrid density r = 1 + rho,
  velocity u = w / r.
* Euler fluid-particle (m = 3): W = (r, rho, w), fluid density n = r - rho,
  velocity u = w / r, fluid fraction nu = n / r.

All state functions accept a single state of shape (m,) or a batch of shape
(m, N); matrices then come back with shape (m, m, N).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, NumericError, SingularStateError

RHO_MIN = 1e-12
N_MIN = 1e-12

BURGERS = "burgers"
EULER = "euler"


# ---------------------------------------------------------------- pressure laws

def _check_nonneg(n, what="n"):
    if np.any(np.asarray(n) < 0):
        raise DomainError(f"{what} must be non-negative, got {n!r}")


@dataclass(frozen=True)
class GammaLaw:
    """p(n) = C n**gamma."""

    C: float = 1.0
    gamma: float = 2.0

    def __post_init__(self):
        if not self.C > 0:
            raise DomainError(f"pressure constant must be positive, got {self.C}")
        if not self.gamma > 1:
            raise DomainError(f"gamma must exceed 1, got {self.gamma}")

    def eval(self, n):
        _check_nonneg(n)
        C, g = self.C, self.gamma
        n = np.asarray(n, dtype=float)
        with np.errstate(divide="ignore"):
            p = C * n**g
            dp = C * g * n ** (g - 1)
            d2p = C * g * (g - 1) * n ** (g - 2)
        if n.ndim == 0:
            return float(p), float(dp), float(d2p)
        return p, dp, d2p

    def inverse(self, y):
        _check_nonneg(y, "pressure")
        out = (np.asarray(y, dtype=float) / self.C) ** (1.0 / self.gamma)
        return float(out) if out.ndim == 0 else out

    def potential(self, n):
        """Pi(n) with Pi'' = p'/n and Pi(0) = Pi'(0) = 0."""
        _check_nonneg(n)
        out = self.C * np.asarray(n, dtype=float) ** self.gamma / (self.gamma - 1)
        return float(out) if out.ndim == 0 else out

    def dpotential(self, n):
        _check_nonneg(n)
        g = self.gamma
        out = self.C * g / (g - 1) * np.asarray(n, dtype=float) ** (g - 1)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TabulatedLaw:
    """Pressure law given by user callbacks for p, p' and p''.

    The callbacks are sampled on construction to check p(0) = 0 and
    p' > 0, p'' > 0; a failure raises DomainError.
    """

    p: Callable
    dp: Callable
    d2p: Callable
    check_points: np.ndarray = field(
        default_factory=lambda: np.geomspace(1e-6, 1e3, 64), repr=False, compare=False
    )

    def __post_init__(self):
        if abs(float(self.p(0.0))) > 1e-12:
            raise DomainError("tabulated pressure must satisfy p(0) = 0")
        for n in self.check_points:
            if not (self.dp(float(n)) > 0 and self.d2p(float(n)) > 0):
                raise DomainError(f"tabulated pressure not increasing and convex at n={n:g}")

    def eval(self, n):
        _check_nonneg(n)
        n = np.asarray(n, dtype=float)
        if n.ndim == 0:
            x = float(n)
            return float(self.p(x)), float(self.dp(x)), float(self.d2p(x))
        flat = n.ravel()
        vals = np.array([[self.p(x), self.dp(x), self.d2p(x)] for x in flat], dtype=float)
        return tuple(vals[:, k].reshape(n.shape) for k in range(3))

    def _inverse1(self, y):
        if y == 0:
            return 0.0
        hi = 1.0
        for _ in range(200):
            if self.p(hi) >= y:
                break
            hi *= 2.0
        else:
            raise NumericError(f"could not bracket p(n) = {y}")
        try:
            return optimize.brentq(lambda s: self.p(s) - y, 0.0, hi,
                                   xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
        except RuntimeError as exc:
            raise NumericError(f"pressure inversion failed for y={y}") from exc

    def inverse(self, y):
        _check_nonneg(y, "pressure")
        y = np.asarray(y, dtype=float)
        if y.ndim == 0:
            return self._inverse1(float(y))
        return np.vectorize(self._inverse1)(y)

    def _dpot1(self, n):
        val, _ = integrate.quad(lambda s: self.dp(s) / s, 0.0, n, limit=200)
        return val

    def dpotential(self, n):
        _check_nonneg(n)
        n = np.asarray(n, dtype=float)
        if n.ndim == 0:
            return self._dpot1(float(n))
        return np.vectorize(self._dpot1)(n)

    def potential(self, n):
        _check_nonneg(n)
        n = np.asarray(n, dtype=float)
        f = lambda x: integrate.quad(self._dpot1, 0.0, x, limit=200)[0]
        if n.ndim == 0:
            return f(float(n))
        return np.vectorize(f)(n)


def pressure_eval(law, n):
    """Return (p, p', p'') at n."""
    return law.eval(n)


def pressure_inverse(law, y):
    """Return the density n >= 0 with p(n) = y."""
    return law.inverse(y)


# ----------------------------------------------------------------------- models

@dataclass(frozen=True)
class Model:
    kind: str
    theta: float = 0.0
    law: object = None
    viscous: bool = True

    def __post_init__(self):
        if self.kind not in (BURGERS, EULER):
            raise DomainError(f"unknown model kind {self.kind!r}")
        if not self.theta >= 0:
            raise DomainError(f"temperature must be non-negative, got {self.theta}")
        if self.kind == EULER and self.law is None:
            raise DomainError("the Euler model needs a pressure law")

    @property
    def m(self):
        return 2 if self.kind == BURGERS else 3

    @classmethod
    def burgers(cls, theta=1.0):
        return cls(BURGERS, float(theta))

    @classmethod
    def euler(cls, law=None, theta=0.0):
        return cls(EULER, float(theta), law if law is not None else GammaLaw())


def _as_state(model, W):
    W = np.asarray(W, dtype=float)
    if W.shape[0] != model.m:
        raise DomainError(f"expected a state with {model.m} components, got shape {W.shape}")
    return W


def _unpack(model, W):
    """Return (r, rho, n, w, u) for either model, validating signs."""
    W = _as_state(model, W)
    if model.kind == BURGERS:
        rho, w = W[0], W[1]
        r = 1.0 + rho
        n = np.ones_like(r)
    else:
        r, rho, w = W[0], W[1], W[2]
        n = r - rho
    if np.any(r <= 0):
        raise SingularStateError("hybrid density r must be positive")
    if np.any(rho < 0):
        raise DomainError("particle density rho must be non-negative")
    if np.any(n < 0):
        raise DomainError("fluid density n = r - rho must be non-negative")
    return r, rho, n, w, w / r


def flux(model, W):
    r, rho, n, w, u = _unpack(model, W)
    if model.kind == BURGERS:
        return np.array([rho * u, w * u + model.theta * rho])
    p, _, _ = model.law.eval(n)
    return np.array([w, rho * u, w * u + p + model.theta * rho])


def jacobian(model, W):
    r, rho, n, w, u = _unpack(model, W)
    th = model.theta
    if model.kind == BURGERS:
        return np.array([[u / r, rho / r],
                         [-u * u + th, 2 * u]])
    _, dp, _ = model.law.eval(n)
    z, one = np.zeros_like(r), np.ones_like(r)
    return np.array([[z, z, one],
                     [-rho * u / r, u, rho / r],
                     [-u * u + dp, -dp + th, 2 * u]])


def diffusion_parts(model, W):
    """Return (D0, D1) with D = D0 + theta * D1."""
    r, rho, n, w, u = _unpack(model, W)
    z = np.zeros_like(r)
    if not model.viscous:
        zero = np.zeros((model.m, model.m) + np.shape(r))
        return zero, zero.copy()
    if model.kind == BURGERS:
        a = rho * u / r**3
        D0 = np.array([[a * u, -a], [z, z]])
        D1 = np.array([[1 / r**2, z], [-rho * u / r, rho / r]])
        return D0, D1
    _, dp, _ = model.law.eval(n)
    nu = n / r
    s = nu * (1 - nu) * dp
    D0 = np.array([[z, z, z], [-s, s, z], [z, z, z]])
    D1 = np.array([[z, z, z], [z, nu * nu, z], [-(1 - nu) * u, z, 1 - nu]])
    return D0, D1


def diffusion(model, W):
    D0, D1 = diffusion_parts(model, W)
    if model.theta == 0:
        return D0
    return D0 + model.theta * D1


@dataclass(frozen=True)
class EntropyPack:
    value: float
    gradient: np.ndarray
    hessian: np.ndarray


def _log_term(model, rho):
    """theta*rho*ln(rho) and its first two derivatives."""
    th = model.theta
    if th == 0:
        return 0.0, 0.0, 0.0
    if np.any(rho < RHO_MIN):
        raise DomainError("entropy needs rho > 0 when theta > 0")
    return th * rho * np.log(rho), th * (1 + np.log(rho)), th / rho


def entropy_value(model, W):
    """Entropy density; vectorised over a batch of states."""
    r, rho, n, w, u = _unpack(model, W)
    s0, _, _ = _log_term(model, rho)
    val = 0.5 * w * u + s0
    if model.kind == EULER:
        val = val + model.law.potential(n)
    return val


def entropy_pack(model, W):
    r, rho, n, w, u = _unpack(model, W)
    if np.ndim(r) != 0:
        raise DomainError("entropy_pack takes a single state")
    s0, s1, s2 = _log_term(model, rho)
    if model.kind == BURGERS:
        grad = np.array([-0.5 * u * u + s1, u])
        hess = np.array([[u * u / r + s2, -u / r],
                         [-u / r, 1 / r]])
        return EntropyPack(float(0.5 * w * u + s0), grad, hess)
    if n < N_MIN:
        raise DomainError("entropy needs n > 0")
    _, dp, _ = model.law.eval(n)
    pi1 = model.law.dpotential(n)
    pi2 = dp / n
    grad = np.array([-0.5 * u * u + pi1, -pi1 + s1, u])
    hess = np.array([[u * u / r + pi2, -pi2, -u / r],
                     [-pi2, pi2 + s2, 0.0],
                     [-u / r, 0.0, 1 / r]])
    value = 0.5 * w * u + model.law.potential(n) + s0
    return EntropyPack(float(value), grad, hess)


def to_primitive(model, W):
    """Burgers: (rho, u).  Euler: (n, rho, u)."""
    r, rho, n, w, u = _unpack(model, W)
    if model.kind == BURGERS:
        return np.array([rho, u])
    return np.array([n, rho, u])


def from_primitive(model, U):
    U = np.asarray(U, dtype=float)
    if model.kind == BURGERS:
        rho, u = U[0], U[1]
        return np.array([rho, (1 + rho) * u])
    n, rho, u = U[0], U[1], U[2]
    r = n + rho
    return np.array([r, rho, r * u])


def burgers_state(rho, u):
    return from_primitive(Model.burgers(), [rho, u])


def euler_state(n, rho, u):
    return np.array([n + rho, rho, (n + rho) * u], dtype=float)
