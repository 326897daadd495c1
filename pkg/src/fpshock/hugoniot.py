"""Rankine-Hugoniot jumps, shock branches and Liu admissibility."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import models
from .errors import DomainError, NumericError
from .models import BURGERS, Model

QUOTIENT_SWITCH = 1e-8
LIU_POINTS = 64


def rh_residual(model, W_star, W, c):
    """F(W) - F(W_star) - c (W - W_star)."""
    W_star = np.asarray(W_star, dtype=float)
    W = np.asarray(W, dtype=float)
    return models.flux(model, W) - models.flux(model, W_star) - c * (W - W_star)


def _check_sign(sign):
    if sign not in (1, -1):
        raise DomainError(f"branch sign must be +1 or -1, got {sign!r}")


def burgers_jump(rho, W_star, theta, sign):
    """Velocity and speed (u, c) of the state with density rho on a Burgers branch.

    Vectorised in rho; rho = 0 is allowed (it gives c = u_star).
    """
    _check_sign(sign)
    rho_s, u_s = models.to_primitive(Model.burgers(theta), W_star)
    if not rho_s > 0:
        raise DomainError("reference density must be positive")
    rho = np.asarray(rho, dtype=float)
    r = 1 + rho
    root = np.sqrt(u_s * u_s + 4 * theta * rho_s * r)
    u = u_s + (rho - rho_s) * (u_s + sign * root) / (2 * rho_s * r)
    c = u_s + sign * (rho / rho_s) * (root + sign * u_s) / (2 * r)
    return u, c


def euler_jump(n, W_star, law, theta, sign):
    """(rho, u, c) of the state with fluid density n on an Euler branch."""
    _check_sign(sign)
    n_s, rho_s, u_s = models.to_primitive(Model.euler(law, theta), W_star)
    if not (n_s > 0 and rho_s > 0):
        raise DomainError("reference densities must be positive")
    n = np.asarray(n, dtype=float)
    if np.any(n <= 0):
        raise DomainError("branch parameter n must be positive")
    r_s = n_s + rho_s
    p_s, dp_s, _ = law.eval(n_s)
    p, _, _ = law.eval(n)
    close = np.abs(n - n_s) < QUOTIENT_SWITCH * n_s
    with np.errstate(invalid="ignore", divide="ignore"):
        quot = np.where(close, dp_s, (p - p_s) / np.where(close, 1.0, n - n_s))
    rad = (n / r_s) * (theta * rho_s / n_s + quot)
    if np.any(rad < 0):
        raise NumericError("negative radicand in the Euler shock speed")
    c = u_s + sign * np.sqrt(rad)
    rho = n * rho_s / n_s
    u = u_s + (c - u_s) * (n - n_s) / n
    return rho, u, c


def euler_contact(W_star, law, theta, rho):
    """Contact jump: same velocity, pressure balance p + theta rho, speed u_star.

    For theta = 0 the fluid density is unchanged and only rho jumps.
    """
    model = Model.euler(law, theta)
    n_s, rho_s, u_s = models.to_primitive(model, W_star)
    if theta == 0:
        n = n_s
    else:
        p_s, _, _ = law.eval(n_s)
        target = p_s + theta * (rho_s - rho)
        if target < 0:
            raise DomainError("no contact state with non-negative pressure")
        n = law.inverse(target)
    return models.euler_state(n, rho, u_s), float(u_s)


@dataclass
class HugoniotBranch:
    model: Model
    sign: int
    param_name: str
    params: np.ndarray
    states: np.ndarray  # shape (N, m)
    speeds: np.ndarray
    liu_ok: np.ndarray
    W_star: np.ndarray
    residuals: np.ndarray

    @property
    def param_star(self):
        return float(self.W_star[0] if self.param_name == "rho" else self.W_star[0] - self.W_star[1])

    def rows(self):
        for p, W, c, ok in zip(self.params, self.states, self.speeds, self.liu_ok):
            yield p, W, c, ok


def sample_params(p_star, lo, hi, n_samples):
    """Parameters in [lo, hi], clustered geometrically around p_star when it is inside."""
    if not (0 < lo < hi):
        raise DomainError("parameter range must satisfy 0 < lo < hi")
    if n_samples < 3:
        raise DomainError("need at least three samples")
    if not lo <= p_star <= hi:
        return np.geomspace(lo, hi, n_samples)
    rest = n_samples - 1
    k_left = round(rest * (p_star - lo) / (hi - lo))
    k_right = rest - k_left
    left = p_star - (p_star - lo) * np.geomspace(1.0, 1e-6, k_left) if k_left else np.empty(0)
    right = p_star + (hi - p_star) * np.geomspace(1e-6, 1.0, k_right) if k_right else np.empty(0)
    return np.concatenate([left, [p_star], right])


def _liu_flags(speed_fn, p_star, params, speeds):
    """Strict Liu test: c(p) < c(s) for every s between p_star (inclusive) and p."""
    flags = np.zeros(len(params), dtype=bool)
    for i, (p, c) in enumerate(zip(params, speeds)):
        if p == p_star:
            continue
        between = np.linspace(p_star, p, LIU_POINTS + 1)[:-1]
        flags[i] = bool(np.all(c < speed_fn(between)))
    return flags


def _finish(model, sign, name, params, states, speeds, W_star, speed_fn, p_star):
    res = np.array([np.linalg.norm(rh_residual(model, W_star, W, c)) for W, c in zip(states, speeds)])
    scale = 1 + np.linalg.norm(models.flux(model, W_star))
    worst = np.max(res / scale)
    if worst > 1e-10:
        raise NumericError(f"branch sample violates Rankine-Hugoniot (scaled residual {worst:.3e})")
    liu = _liu_flags(speed_fn, p_star, params, speeds)
    return HugoniotBranch(model, sign, name, params, states, speeds, liu, np.asarray(W_star, float), res)


def burgers_branch(W_star, theta, sign, rho_range=(0.1, 10.0), n_samples=101, params=None):
    model = Model.burgers(theta)
    W_star = np.asarray(W_star, dtype=float)
    rho_s = float(W_star[0])
    if params is None:
        params = sample_params(rho_s, rho_range[0], rho_range[1], n_samples)
    params = np.asarray(params, dtype=float)
    if np.any(params <= 0):
        raise DomainError("branch densities must be positive")
    u, c = burgers_jump(params, W_star, theta, sign)
    states = np.stack([params, (1 + params) * u], axis=1)
    fn = lambda s: burgers_jump(s, W_star, theta, sign)[1]
    return _finish(model, sign, "rho", params, states, c, W_star, fn, rho_s)


def euler_branch(W_star, law, theta, sign, n_range=(0.1, 10.0), n_samples=101, params=None):
    model = Model.euler(law, theta)
    W_star = np.asarray(W_star, dtype=float)
    n_s = float(W_star[0] - W_star[1])
    if params is None:
        params = sample_params(n_s, n_range[0], n_range[1], n_samples)
    params = np.asarray(params, dtype=float)
    rho, u, c = euler_jump(params, W_star, law, theta, sign)
    r = params + rho
    states = np.stack([r, rho, r * u], axis=1)
    fn = lambda s: euler_jump(s, W_star, law, theta, sign)[2]
    return _finish(model, sign, "n", params, states, c, W_star, fn, n_s)


@dataclass
class LiuReport:
    admissible: np.ndarray
    expected_direction: int  # +1: admissible below param_star, -1: above
    monotone: bool
    speed_slope_sign: int
    quotient_increasing: bool | None
    model_violation: bool


def liu_check(branch):
    """Check speed monotonicity along the branch and the Liu side of each sample.

    A non-monotone speed, or admissibility flags on the wrong side of the
    reference parameter, is reported as a model violation.
    """
    p, c = branch.params, branch.speeds
    if len(p) < 3:
        raise DomainError("liu_check needs at least three samples")
    slope = np.diff(c) / np.diff(p)
    monotone = bool(np.all(branch.sign * slope > 0))
    p_star = branch.param_star
    # speeds increase with the parameter on the + branch, so Liu picks the
    # lower side there and the upper side on the - branch
    expected = p < p_star if branch.sign > 0 else p > p_star
    side_ok = bool(np.array_equal(branch.liu_ok, expected))
    quot_ok = None
    if branch.model.kind != BURGERS:
        law = branch.model.law
        n_s = p_star
        away = np.abs(p - n_s) >= QUOTIENT_SWITCH * n_s
        pp = law.eval(p[away])[0]
        q = (pp - law.eval(n_s)[0]) / (p[away] - n_s)
        quot_ok = bool(np.all(np.diff(q) > 0))
    violation = not (monotone and side_ok and quot_ok is not False)
    return LiuReport(branch.liu_ok.copy(), branch.sign, monotone, branch.sign if monotone else 0,
                     quot_ok, violation)
