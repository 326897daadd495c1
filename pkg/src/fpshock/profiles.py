"""Viscous shock profiles.

Euler profiles are computed in the comoving frame (speed 0) after the
rescaling y = x / eps, so the profile system reads D(W) W' = F(W) - F(W_star).
The first row gives w = w_star along the orbit, which leaves a system for the
fluid density n and the hybrid density r.  Reduced parameters:

    tau = n_star / r_star,  kappa = r_star u_star**2 / p_star,
    kappa_star = n_star p'(n_star) / p_star,  eps = r_star theta / p_star.

Rescaled variables carry no unit: N = n / n_star, R = r / r_star and the
rescaled pressure is pbar(N) = p(n_star N) / p_star.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import optimize
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.spatial import cKDTree

from . import models
from ._numerics import fd_jacobian, safe_newton
from .errors import (AdmissibilityError, ConnectionNotFound, DomainError,
                     NumericError, SingularStateError, ZeroAmplitudeError)
from .hugoniot import rh_residual
from .models import RHO_MIN, Model

OFFSET = 1e-6
ENDPOINT_TOL = 1e-8


# ------------------------------------------------------------ reduced parameters

@dataclass(frozen=True)
class RescaledPressure:
    law: object
    n_star: float
    p_star: float

    @classmethod
    def of(cls, law, n_star):
        return cls(law, float(n_star), float(law.eval(n_star)[0]))

    def eval(self, N):
        p, dp, d2p = self.law.eval(self.n_star * np.asarray(N, dtype=float))
        ns, ps = self.n_star, self.p_star
        return p / ps, dp * ns / ps, d2p * ns * ns / ps

    def inverse(self, y):
        return self.law.inverse(y * self.p_star) / self.n_star

    @property
    def kappa_star(self):
        return float(self.eval(1.0)[1])


@dataclass(frozen=True)
class ReducedParams:
    tau: float
    kappa: float
    kappa_star: float
    eps: float
    u_sign: int
    n_star: float
    r_star: float
    u_star: float
    law: object
    theta: float
    pbar: RescaledPressure = field(repr=False)

    @property
    def p_star(self):
        return self.pbar.p_star

    @property
    def w_star(self):
        return self.r_star * self.u_star

    @property
    def W_star(self):
        return models.euler_state(self.n_star, self.r_star - self.n_star, self.u_star)

    @property
    def model(self):
        return Model.euler(self.law, self.theta)


def reduced_params(n_star, r_star, u_star, law, theta=0.0):
    if not n_star > 0:
        raise DomainError("n_star must be positive")
    if not n_star < r_star:
        raise DomainError("tau = n_star / r_star must lie in (0, 1)")
    if u_star == 0:
        raise DomainError("u_star must be non-zero")
    if theta < 0:
        raise DomainError("theta must be non-negative")
    pbar = RescaledPressure.of(law, n_star)
    ps = pbar.p_star
    return ReducedParams(
        tau=n_star / r_star,
        kappa=r_star * u_star**2 / ps,
        kappa_star=pbar.kappa_star,
        eps=r_star * theta / ps,
        u_sign=1 if u_star > 0 else -1,
        n_star=float(n_star),
        r_star=float(r_star),
        u_star=float(u_star),
        law=law,
        theta=float(theta),
        pbar=pbar,
    )


def reduced_from(tau, kappa, law, n_star=1.0, eps=0.0, u_sign=1):
    """Build ReducedParams from (tau, kappa, eps) and the base fluid density."""
    if not 0 < tau < 1:
        raise DomainError("tau must lie in (0, 1)")
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    r_star = n_star / tau
    ps = float(law.eval(n_star)[0])
    u_star = (1 if u_sign > 0 else -1) * np.sqrt(ps * tau * kappa / n_star)
    return reduced_params(n_star, r_star, u_star, law, eps * ps / r_star)


# ------------------------------------------------------------ g_kappa and friends

def n_bar(kappa, pbar):
    """Upper end of the interval where r_kappa is defined: pbar(n_bar) = 1 + kappa."""
    return float(pbar.inverse(1 + kappa))


def r_kappa(N, kappa, pbar):
    return kappa / (1 + kappa - pbar.eval(N)[0])


def _g(N, kappa, pbar):
    N = np.float64(N) if np.ndim(N) == 0 else np.asarray(N, dtype=float)
    p, dp, _ = pbar.eval(N)
    with np.errstate(divide="ignore", over="ignore"):
        return (1 + kappa - p) / kappa - 1 / N, 1 / N**2 - dp / kappa


def g_kappa(N, kappa, pbar):
    """Value and derivative of g_kappa(N) = T(N, r_kappa(N))."""
    if not 0 < N < n_bar(kappa, pbar):
        raise DomainError(f"g_kappa is defined on (0, n_bar), got N={N}")
    v, d = _g(N, kappa, pbar)
    return float(v), float(d)


class Crossing(NamedTuple):
    n: float
    degenerate: bool


def _is_critical(kappa, pbar):
    return abs(kappa - pbar.kappa_star) <= 1e-14 * pbar.kappa_star


def _near_one(f, side):
    """Point 1 + side * delta where f has the sign of side * f'(1)."""
    delta = 1e-3
    for _ in range(80):
        x = 1 + side * delta
        if f(x) > 0:
            return x
        delta /= 2
    raise NumericError("could not bracket the root away from N = 1")


def n_cross(kappa, pbar):
    """Non-trivial zero of g_kappa (rescaled fluid density of the far state)."""
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    if _is_critical(kappa, pbar):
        return Crossing(1.0, True)
    f = lambda N: _g(N, kappa, pbar)[0]
    if kappa < pbar.kappa_star:
        lo, hi = 1e-300, _near_one(f, -1)
    else:
        lo, hi = _near_one(f, +1), n_bar(kappa, pbar)
    try:
        root = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    except ValueError as exc:
        raise NumericError("no sign change of g_kappa in the bracket") from exc
    return Crossing(float(root), False)


def kappa_of_n(N, pbar):
    """Inverse of n_cross: kappa(N) = N (pbar(N) - 1) / (N - 1)."""
    if N == 1:
        return pbar.kappa_star
    return float(N * (pbar.eval(N)[0] - 1) / (N - 1))


class Sharp(NamedTuple):
    n_hash: float
    tau_hash: float


def tau_sharp(kappa, pbar):
    """Tangency point and threshold tau_#(kappa) above which rho = r - n turns negative."""
    if not kappa > 0:
        raise DomainError("kappa must be positive")

    def h(N):
        p, dp, _ = pbar.eval(N)
        return p + N * dp - (1 + kappa)

    hi = 1.0
    while h(hi) <= 0:
        hi *= 2
    nh = optimize.brentq(h, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    p, dp, _ = pbar.eval(nh)
    th = kappa / (nh * nh * dp)
    rk = kappa / (1 + kappa - p)
    drk = kappa * dp / (1 + kappa - p) ** 2
    if abs(rk - th * nh) > 1e-10 * rk or abs(drk - th) > 1e-10 * th:
        raise NumericError("tangency check failed for tau_sharp")
    return Sharp(float(nh), float(th))


@dataclass(frozen=True)
class EquilibriumPair:
    n_cross: float
    r_cross: float
    first_order_coeff: float


def n_cross_eps(kappa, tau, eps, pbar):
    """Far-state equilibrium of the positive-temperature profile system (rescaled).

    Solves g_kappa(N) = eps (1 - tau) / kappa (N - 1) for the root N != 1.
    """
    if eps < 0:
        raise DomainError("eps must be non-negative")
    if not 0 < tau < 1:
        raise DomainError("tau must lie in (0, 1)")
    if _is_critical(kappa, pbar):
        raise ZeroAmplitudeError("kappa equals kappa_star")
    n0 = n_cross(kappa, pbar).n
    slope = (1 - tau) / kappa
    _, g1 = _g(n0, kappa, pbar)
    coeff = slope * (n0 - 1) / g1
    if not coeff < 0:
        raise NumericError("first-order equilibrium shift is not negative")
    if eps == 0:
        return EquilibriumPair(n0, n0, coeff)

    def G(N):
        return _g(N, kappa, pbar)[0] - eps * slope * (N - 1)

    def dG(N):
        return _g(N, kappa, pbar)[1] - eps * slope

    if dG(1.0) > 0:
        lo, hi = _near_one(G, +1), n_bar(kappa, pbar)
    else:
        lo, hi = 1e-300, _near_one(G, -1)
    root = safe_newton(G, dG, lo, hi, n0, tol=1e-15)
    return EquilibriumPair(float(root), float(root), coeff)


# ------------------------------------------------------------ profile container

@dataclass
class ProfileSolution:
    model: Model
    grid: np.ndarray
    states: np.ndarray  # shape (N, m), conservative variables
    W_minus: np.ndarray
    W_plus: np.ndarray
    W_star: np.ndarray
    c: float
    residuals: np.ndarray
    residual_sup: float
    monotone: bool
    minus_is_star: bool
    info: dict = field(default_factory=dict)

    def primitive(self):
        return models.to_primitive(self.model, self.states.T).T


# ------------------------------------------------------------ shooting machinery

@dataclass
class _Orbit:
    s: np.ndarray
    X: np.ndarray
    sol: object
    tdir: int
    from_idx: int


class _Failure(Exception):
    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


def _directions(J, tdir, toward):
    ev, V = np.linalg.eig(tdir * J)
    unstable = [i for i in range(len(ev)) if ev[i].real > 0]
    if not unstable:
        return []
    i = min(unstable, key=lambda k: ev[k].real)
    v = np.real(V[:, i])
    v = v / np.linalg.norm(v)
    if v @ toward < 0:
        v = -v
    return [v, -v]


def _shoot(rhs, start, target, tdir, v, amp, method, rtol, atol, span, margin, opts):
    x0 = start + opts["offset"] * amp * v

    def f(s, x):
        try:
            return tdir * rhs(x)
        except (DomainError, np.linalg.LinAlgError, ZeroDivisionError, FloatingPointError):
            return np.full_like(x, np.nan)

    def arrive(s, x):
        return np.linalg.norm(x - target) - opts["endpoint_tol"] * amp

    def escape(s, x):
        return 10 * amp - np.linalg.norm(x - target)

    def positive(s, x):
        return margin(x)

    for ev in (arrive, escape, positive):
        ev.terminal = True
        ev.direction = -1
    with np.errstate(all="ignore"):
        sol = solve_ivp(f, (0.0, span), x0, method=method, rtol=rtol, atol=atol,
                        events=[arrive, escape, positive], dense_output=True)
    if sol.status == 1 and len(sol.t_events[0]):
        return sol
    if sol.status == 1 and len(sol.t_events[2]):
        raise _Failure("positivity")
    if sol.status == 1:
        raise _Failure("escape")
    if sol.status == -1:
        raise _Failure("integrator: " + sol.message)
    raise _Failure("budget")


def _connect(rhs, ends, plans, method, rtol, atol, margin, opts):
    """Shoot along one-dimensional invariant directions until an orbit links the two ends.

    ``plans`` lists (index of the starting equilibrium, time direction).
    """
    ends = [np.asarray(e, dtype=float) for e in ends]
    amp = np.linalg.norm(ends[1] - ends[0])
    jacs = [fd_jacobian(rhs, e) for e in ends]
    rates = np.abs(np.concatenate([np.linalg.eigvals(J).real for J in jacs]))
    rates = rates[rates > 1e-12]
    if rates.size == 0:
        raise NumericError("both equilibria are non-hyperbolic")
    span = opts["budget"] / rates.min()
    reasons = []
    for idx, tdir in plans:
        start, target = ends[idx], ends[1 - idx]
        for v in _directions(jacs[idx], tdir, target - start):
            try:
                sol = _shoot(rhs, start, target, tdir, v, amp, method, rtol, atol, span, margin, opts)
            except _Failure as fail:
                reasons.append(fail.reason)
                continue
            return _Orbit(sol.t, sol.y.T, sol.sol, tdir, idx), jacs
    return None, reasons


def _dense_grid(orbit, refine):
    s = orbit.s
    pieces = [s[:1]]
    for a, b in zip(s[:-1], s[1:]):
        pieces.append(np.linspace(a, b, refine + 1)[1:])
    s_fine = np.concatenate(pieces)
    X = orbit.sol(s_fine).T
    X[0], X[-1] = orbit.X[0], orbit.X[-1]
    y = orbit.tdir * s_fine
    if orbit.tdir < 0:
        y, X = y[::-1], X[::-1]
    return y, X


def _centre(y, values, mid, dense_value):
    """Abscissa where ``values`` crosses ``mid`` (refined on the dense output)."""
    d = values - mid
    idx = np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) <= 0)[0]
    if idx.size == 0:
        raise NumericError("profile does not cross its midpoint")
    i = idx[0]
    if d[i] == 0:
        return y[i]
    return optimize.brentq(lambda t: dense_value(t) - mid, y[i], y[i + 1], xtol=1e-14)


def _pointwise_defect(model, W_of_y, y, W_ref, c):
    """|D(W) W' - (F(W) - F(W_ref) - c (W - W_ref))| using a centred difference of the dense orbit."""
    scale = 1 + np.linalg.norm(models.flux(model, W_ref))
    out = np.empty(len(y))
    for i, yi in enumerate(y):
        h = 1e-6 * (1 + abs(yi))
        dW = (W_of_y(yi + h) - W_of_y(yi - h)) / (2 * h)
        W = W_of_y(yi)
        lhs = models.diffusion(model, W) @ dW
        out[i] = np.linalg.norm(lhs - rh_residual(model, W_ref, W, c)) / scale
    return out


def _monotone(v, rel_tol=ENDPOINT_TOL):
    """Monotone up to reversals below rel_tol times the total variation of the ends."""
    d = np.diff(v) * np.sign(v[-1] - v[0])
    return bool(np.all(d > -rel_tol * abs(v[-1] - v[0])))


def profile_residual(model, profile, c=None):
    """Sup over interior grid points of the profile-equation defect.

    The derivative is taken from a cubic spline through the grid values, so
    the check uses only the sampled profile.
    """
    if c is None:
        c = profile.c
    y, S = profile.grid, profile.states
    if len(y) < 3:
        raise DomainError("profile needs at least three points")
    dS = CubicSpline(y, S, axis=0)(y, 1)
    W_ref = profile.W_star
    scale = 1 + np.linalg.norm(models.flux(model, W_ref))
    worst = 0.0
    for W, dW in zip(S[1:-1], dS[1:-1]):
        lhs = models.diffusion(model, W) @ dW
        worst = max(worst, np.linalg.norm(lhs - rh_residual(model, W_ref, W, c)) / scale)
    return float(worst)


def _defaults(opts, **base):
    out = dict(offset=OFFSET, endpoint_tol=ENDPOINT_TOL, refine=8, budget=2000.0)
    out.update(base)
    unknown = set(opts) - set(out)
    if unknown:
        raise DomainError(f"unknown profile options: {sorted(unknown)}")
    out.update(opts)
    return out


# ------------------------------------------------------------ temperature-less Euler

def _check_theta0_admissible(params):
    if params.theta != 0:
        raise DomainError("profile_theta0 needs theta = 0")
    if _is_critical(params.kappa, params.pbar):
        raise ZeroAmplitudeError("kappa equals kappa_star: zero-amplitude shock")
    sharp = tau_sharp(params.kappa, params.pbar)
    if params.tau >= sharp.tau_hash:
        raise AdmissibilityError(
            f"tau={params.tau:.6g} >= tau_#={sharp.tau_hash:.6g}: rho would vanish along the profile")
    return sharp


def theta0_rhs(N, params):
    """dN/dy of the rescaled temperature-less profile equation."""
    kappa, tau, pbar = params.kappa, params.tau, params.pbar
    p, dp, _ = pbar.eval(N)
    R = kappa / (1 + kappa - p)
    return kappa * R * R * (1 / R - 1 / N) / (params.u_star * (R - tau * N) * dp)


def theta0_rhs_physical(n, params):
    """dn/dy from ((r - n) p'(n) / r**2) n' = u_star (r_star / r - n_star / n), r from the constraint."""
    law, ns, rs, us = params.law, params.n_star, params.r_star, params.u_star
    p, dp, _ = law.eval(n)
    ps = params.p_star
    r = rs * rs * us * us / (rs * us * us + ps - p)
    return us * (rs / r - ns / n) * r * r / ((r - n) * dp)


def theta0_constraint_r(n, params):
    """Hybrid density from momentum balance with w = w_star and theta = 0."""
    rs, us = params.r_star, params.u_star
    p = params.law.eval(n)[0]
    return rs * rs * us * us / (rs * us * us + params.p_star - p)


def profile_theta0(params, frame="rescaled", **opts):
    """Temperature-less Euler profile by integrating the scalar equation for n.

    ``frame="physical"`` integrates the unscaled equation in n directly (used
    as a consistency check of the rescaling).
    """
    o = _defaults(opts, rtol=1e-10, atol=1e-14)
    sharp = _check_theta0_admissible(params)
    nx = n_cross(params.kappa, params.pbar).n
    ns = params.n_star
    if frame == "rescaled":
        f = lambda N: theta0_rhs(N, params)
        a, b = nx, 1.0
    elif frame == "physical":
        f = lambda n: theta0_rhs_physical(n, params)
        a, b = nx * ns, ns
    else:
        raise DomainError(f"unknown frame {frame!r}")
    gap = abs(b - a)
    sigma = np.sign(b - a)
    x0 = a + sigma * o["offset"] * gap
    tdir = int(np.sign(f(x0) * sigma))
    # decay rate near the end point sets the integration budget
    h = 1e-6 * gap
    rate = abs((f(b + h) - f(b - h)) / (2 * h))

    def arrive(s, x):
        return abs(x[0] - b) - o["endpoint_tol"] * gap

    arrive.terminal = True
    sol = solve_ivp(lambda s, x: tdir * np.array([f(x[0])]), (0.0, o["budget"] / rate), [x0],
                    method="DOP853", rtol=o["rtol"], atol=o["atol"], events=arrive, dense_output=True)
    if not (sol.status == 1 and len(sol.t_events[0])):
        raise NumericError("temperature-less profile did not reach the end state: " + sol.message)
    orbit = _Orbit(sol.t, sol.y.T, sol.sol, tdir, 0)
    y, X = _dense_grid(orbit, o["refine"])
    N = X[:, 0] / (ns if frame == "physical" else 1.0)
    dense_N = lambda t: orbit.sol(tdir * t)[0] / (ns if frame == "physical" else 1.0)
    y0 = _centre(y, N, 0.5 * (1 + nx), dense_N)
    y = y - y0

    def W_of_y(t):
        Nt = dense_N(t + y0)
        n = ns * Nt
        r = theta0_constraint_r(n, params)
        return models.euler_state(n, r - n, params.w_star / r)

    n = ns * N
    r = theta0_constraint_r(n, params)
    states = np.stack([r, r - n, np.full_like(r, params.w_star)], axis=1)
    # the reconstructed r must match the rescaled map r_star * r_kappa(N)
    constraint_defect = float(np.max(np.abs(r - params.r_star * r_kappa(N, params.kappa, params.pbar)) / r))

    # pointwise defect of ((r - n) p'(n) / r^2) n' = u_star (r_star / r - n_star / n)
    ode_res = np.empty(len(y))
    for i, t in enumerate(y):
        hh = 1e-6 * (1 + abs(t))
        dn = ns * (dense_N(t + y0 + hh) - dense_N(t + y0 - hh)) / (2 * hh)
        _, dp, _ = params.law.eval(n[i])
        lhs = (r[i] - n[i]) * dp / r[i] ** 2 * dn
        ode_res[i] = abs(lhs - params.u_star * (params.r_star / r[i] - ns / n[i]))

    model = params.model
    W_star = params.W_star
    W_cross = models.euler_state(ns * nx, params.r_star * nx - ns * nx, params.w_star / (params.r_star * nx))
    full = _pointwise_defect(model, W_of_y, y, W_star, 0.0)
    star_first = tdir < 0  # integrating backwards from n_cross means n_cross is the +inf end
    return ProfileSolution(
        model=model,
        grid=y,
        states=states,
        W_minus=W_star if star_first else W_cross,
        W_plus=W_cross if star_first else W_star,
        W_star=W_star,
        c=0.0,
        residuals=full,
        residual_sup=float(full.max()),
        monotone=_monotone(n),
        minus_is_star=star_first,
        info=dict(n_cross=nx, n_hash=sharp.n_hash, tau_hash=sharp.tau_hash,
                  ode_residual_sup=float(ode_res.max()), ode_residuals=ode_res,
                  constraint_defect=constraint_defect,
                  min_rho=float(np.min(r - n)), frame=frame),
    )


# ------------------------------------------------------------ positive temperature Euler

def theta_rhs(n, r, params):
    """(dn/dy, dr/dy) for the positive-temperature Euler profile, physical variables."""
    th, ns, rs, ws = params.theta, params.n_star, params.r_star, params.w_star
    rho = r - n
    rho_s = rs - ns
    p, dp, _ = params.law.eval(n)
    brace = 1 / r - 1 / rs + (p - params.p_star + th * (rho - rho_s)) / ws**2
    dr = -ws * r * r * brace / (th * rho)
    dn = r * r / (n * (th * n + rho * dp)) * (ws * (n / r - ns / rs) + th * n * n / r**2 * dr)
    return dn, dr


def theta_rhs_rescaled(N, R, params):
    """(dN/dy, dR/dy) of the renormalised positive-temperature system."""
    kappa, tau, eps, us = params.kappa, params.tau, params.eps, params.u_star
    p, dp, _ = params.pbar.eval(N)
    T = 1 / R - 1 / N
    B = (1 + kappa - p) / kappa - 1 / R + eps * (1 - tau - (R - tau * N)) / kappa
    phi = R - tau * N
    dN = kappa * R * R / (phi * dp + eps * tau * tau * N) * (T + tau * N / phi * B) / us
    dR = kappa * R * R / phi * B / (eps * us)
    return dN, dR


def profile_theta(params, **opts):
    """Positive-temperature Euler profile by stiff shooting between the two equilibria."""
    o = _defaults(opts, rtol=1e-8, atol=1e-10, refine=8)
    if not params.theta > 0:
        raise DomainError("profile_theta needs theta > 0")
    if _is_critical(params.kappa, params.pbar):
        raise ZeroAmplitudeError("kappa equals kappa_star: zero-amplitude shock")
    sharp = tau_sharp(params.kappa, params.pbar)
    if params.tau >= sharp.tau_hash:
        raise AdmissibilityError(
            f"tau={params.tau:.6g} >= tau_#={sharp.tau_hash:.6g}: outside the admissible regime")
    eq = n_cross_eps(params.kappa, params.tau, params.eps, params.pbar)
    ns, rs = params.n_star, params.r_star
    E_cross = np.array([ns * eq.n_cross, rs * eq.r_cross])
    E_star = np.array([ns, rs])

    def rhs(x):
        return np.array(theta_rhs(x[0], x[1], params))

    margin = lambda x: (x[1] - x[0]) - RHO_MIN
    plans = [(0, +1), (0, -1), (1, +1), (1, -1)]
    orbit, info = _connect(rhs, [E_cross, E_star], plans, "Radau", o["rtol"], o["atol"], margin, o)
    if orbit is None:
        if "positivity" in info:
            raise AdmissibilityError("rho reached zero while shooting for the profile")
        raise ConnectionNotFound(f"no connection found ({', '.join(info)})")
    y, X = _dense_grid(orbit, o["refine"])
    mid = 0.5 * (E_cross[0] + E_star[0])
    dense = lambda t: orbit.sol(orbit.tdir * t)
    y0 = _centre(y, X[:, 0], mid, lambda t: dense(t)[0])
    y = y - y0
    n, r = X[:, 0], X[:, 1]
    ws = params.w_star
    states = np.stack([r, r - n, np.full_like(r, ws)], axis=1)

    def W_of_y(t):
        nn, rr = dense(t + y0)
        return np.array([rr, rr - nn, ws])

    model = params.model
    W_star = params.W_star
    W_cross = np.array([E_cross[1], E_cross[1] - E_cross[0], ws])
    full = _pointwise_defect(model, W_of_y, y, W_star, 0.0)
    cross_first = (orbit.from_idx == 0) == (orbit.tdir > 0)
    return ProfileSolution(
        model=model,
        grid=y,
        states=states,
        W_minus=W_cross if cross_first else W_star,
        W_plus=W_star if cross_first else W_cross,
        W_star=W_star,
        c=0.0,
        residuals=full,
        residual_sup=float(full.max()),
        monotone=_monotone(n),
        minus_is_star=not cross_first,
        info=dict(n_cross=eq.n_cross, first_order_coeff=eq.first_order_coeff,
                  tau_hash=sharp.tau_hash, min_rho=float(np.min(r - n)),
                  start_index=orbit.from_idx, time_direction=orbit.tdir),
    )


def distance_to_theta0_orbit(profile, params, n_samples=20001):
    """Sup over the profile of the distance in (N, R) to the temperature-less orbit R = r_kappa(N)."""
    nx = n_cross(params.kappa, params.pbar).n
    N0 = np.linspace(min(nx, 1.0), max(nx, 1.0), n_samples)
    curve = np.stack([N0, r_kappa(N0, params.kappa, params.pbar)], axis=1)
    r = profile.states[:, 0]
    n = r - profile.states[:, 1]
    pts = np.stack([n / params.n_star, r / params.r_star], axis=1)
    dist, _ = cKDTree(curve).query(pts)
    return float(dist.max())


# ------------------------------------------------------------ Burgers

def profile_burgers(W_star, W_cross, c, theta, **opts):
    """Viscous profile of the Burgers system from W_star (y -> -inf) to W_cross (y -> +inf)."""
    o = _defaults(opts, rtol=1e-10, atol=1e-13)
    if not theta > 0:
        raise DomainError("profile_burgers needs theta > 0")
    model = Model.burgers(theta)
    W_star = np.asarray(W_star, dtype=float)
    W_cross = np.asarray(W_cross, dtype=float)
    amp = np.linalg.norm(W_cross - W_star)
    if amp <= 1e-14 * (1 + np.linalg.norm(W_star)):
        raise ZeroAmplitudeError("end states coincide")
    scale = 1 + np.linalg.norm(models.flux(model, W_star))
    if np.linalg.norm(rh_residual(model, W_star, W_cross, c)) > 1e-10 * scale:
        raise DomainError("end states and speed do not satisfy Rankine-Hugoniot")
    for W in (W_star, W_cross):
        if np.linalg.det(models.diffusion(model, W)) < 1e-14:
            raise SingularStateError("diffusion matrix is singular at an end state")

    def rhs(W):
        D = models.diffusion(model, W)
        if np.linalg.det(D) < 1e-14:
            raise SingularStateError("diffusion matrix is singular along the orbit")
        return np.linalg.solve(D, rh_residual(model, W_star, W, c))

    margin = lambda W: W[0] - RHO_MIN
    plans = [(0, +1), (1, -1)]
    orbit, info = _connect(rhs, [W_star, W_cross], plans, "DOP853", o["rtol"], o["atol"], margin, o)
    if orbit is None:
        raise ConnectionNotFound(f"no connection from W_star to W_cross ({', '.join(info)})")
    y, X = _dense_grid(orbit, o["refine"])
    dense = lambda t: orbit.sol(orbit.tdir * t)
    mid = 0.5 * (W_star[0] + W_cross[0])
    y0 = _centre(y, X[:, 0], mid, lambda t: dense(t)[0])
    y = y - y0
    full = _pointwise_defect(model, lambda t: dense(t + y0), y, W_star, c)
    return ProfileSolution(
        model=model,
        grid=y,
        states=X,
        W_minus=W_star,
        W_plus=W_cross,
        W_star=W_star,
        c=float(c),
        residuals=full,
        residual_sup=float(full.max()),
        monotone=_monotone(X[:, 0]),
        minus_is_star=True,
        info=dict(start_index=orbit.from_idx, time_direction=orbit.tdir),
    )
