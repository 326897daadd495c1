"""Small numerical helpers shared by several modules."""

import numpy as np

from .errors import NumericError


def fd_step(x):
    return 1e-6 * (1 + abs(x))


def fd_jacobian(f, x):
    """Central-difference Jacobian of f: R^k -> R^m at x."""
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(x.size):
        h = fd_step(x[j])
        e = np.zeros_like(x)
        e[j] = h
        cols.append((np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2 * h))
    return np.stack(cols, axis=-1)


def safe_newton(f, df, lo, hi, x0, tol=1e-13, maxiter=200):
    """Newton's method kept inside a sign-changing bracket, bisecting when a step leaves it."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NumericError(f"no sign change on [{lo}, {hi}]")
    x = min(max(x0, lo), hi)
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0:
            return x
        if np.sign(fx) == np.sign(flo):
            lo, flo = x, fx
        else:
            hi = x
        d = df(x)
        nxt = x - fx / d if d != 0 else np.nan
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= tol * max(1.0, abs(x)) or hi - lo <= tol * max(1.0, abs(x)):
            return nxt
        x = nxt
    raise NumericError("safeguarded Newton did not converge")
