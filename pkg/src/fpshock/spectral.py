"""Eigenstructure and stability diagnostics for the fluid-particle models."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import models
from .errors import DomainError, NumericError
from .models import BURGERS, Model

GAP_TOL = 1e-10
LD_TOL = 1e-8
NEAR_TOL = 1e-5


def eigenvalues(model, W):
    """Closed-form characteristic speeds, sorted ascending (vectorised)."""
    r, rho, n, w, u = models._unpack(model, W)
    th = model.theta
    if model.kind == BURGERS:
        centre = u + u / (2 * r)
        half = np.sqrt(u * u + 4 * th * rho * r) / (2 * r)
        return np.array([centre - half, centre + half])
    _, dp, _ = model.law.eval(n)
    s = np.sqrt((n * dp + th * rho) / r)
    return np.array([u - s, u, u + s])


def solver_eigenvalues(model, W):
    """Eigenvalues of the Jacobian from a dense general eigensolver."""
    ev = np.linalg.eigvals(models.jacobian(model, W))
    return np.sort(ev.real)


def _sign_fix(v):
    for x in v:
        if abs(x) > 1e-12:
            return v if x > 0 else -v
    return v


def _null_pair(A, lam):
    """Right and left null vectors of A - lam I from the smallest singular value."""
    U, _, Vt = np.linalg.svd(A - lam * np.eye(A.shape[0]))
    return Vt[-1].copy(), U[:, -1].copy()


@dataclass
class SpectralReport:
    eigenvalues: np.ndarray
    right_vectors: np.ndarray  # columns
    left_vectors: np.ndarray  # rows
    solver_eigenvalues: np.ndarray
    strictly_hyperbolic: bool
    gn_indicators: np.ndarray | None = None
    classification: list = field(default_factory=list)
    degenerate_fields: tuple = ()


def _vectors(model, W, lam, normalization):
    A = models.jacobian(model, W)
    m = model.m
    R = np.zeros((m, m))
    L = np.zeros((m, m))
    for i, lv in enumerate(lam):
        rv, lvec = _null_pair(A, lv)
        rv = _sign_fix(rv / np.linalg.norm(rv))
        if normalization == "first" and abs(rv[0]) > 1e-12:
            rv = rv / rv[0]
        elif normalization not in ("unit", "first"):
            raise DomainError(f"unknown normalization {normalization!r}")
        dot = lvec @ rv
        if abs(dot) > 1e-14:
            lvec = lvec / dot
        R[:, i] = rv
        L[i] = lvec
    return R, L


def eigenstructure(model, W, normalization="unit", with_gn=True):
    """Eigenvalues, right/left eigenvectors and field classification at W.

    ``normalization="unit"`` gives unit right vectors; ``"first"`` scales each
    right vector so its first component is 1 (when that component is not ~0).
    Left vectors are always scaled so that l_i . r_i = 1.
    """
    W = np.asarray(W, dtype=float)
    lam = eigenvalues(model, W)
    lam_num = solver_eigenvalues(model, W)
    scale = 1 + np.max(np.abs(lam))
    strict = bool(np.min(np.diff(lam)) > GAP_TOL * scale)
    R, L = _vectors(model, W, lam, normalization)
    rep = SpectralReport(lam, R, L, lam_num, strict)
    if with_gn and strict:
        try:
            gn = _gn_values(model, W, lam, R)
        except DomainError:
            # stencil leaves the state space (boundary state such as rho = 0)
            return rep
        rep.gn_indicators = gn
        rep.classification = [_classify(v, scale) for v in gn]
        rep.degenerate_fields = tuple(i for i, c in enumerate(rep.classification) if c == "LD")
    return rep


def _classify(value, scale):
    if abs(value) <= LD_TOL * scale:
        return "LD"
    if abs(value) <= NEAR_TOL * scale:
        return "near-degenerate"
    return "GN"


def _matched_eigs(model, W, base):
    """Solver eigenvalues at W matched one-to-one to ``base`` by nearest value."""
    ev = solver_eigenvalues(model, W)
    idx = [int(np.argmin(np.abs(ev - b))) for b in base]
    if len(set(idx)) != len(idx):
        return None
    return ev[idx]


def eigenvalue_gradients(model, W, base=None):
    """Central-difference gradients of each eigenvalue, rows indexed by field."""
    W = np.asarray(W, dtype=float)
    if base is None:
        base = eigenvalues(model, W)
    m = model.m
    grads = np.zeros((m, m))
    for j in range(m):
        h = 1e-6 * (1 + abs(W[j]))
        for _ in range(3):
            e = np.zeros(m)
            e[j] = h
            plus = _matched_eigs(model, W + e, base)
            minus = _matched_eigs(model, W - e, base)
            if plus is not None and minus is not None:
                grads[:, j] = (plus - minus) / (2 * h)
                break
            h /= 10
        else:
            raise NumericError("eigenvalues cross inside the finite-difference stencil")
    return grads


def _gn_values(model, W, lam, R):
    grads = eigenvalue_gradients(model, W, lam)
    return np.array([grads[i] @ R[:, i] for i in range(model.m)])


@dataclass
class FieldNonlinearity:
    value: float
    kind: str


def genuine_nonlinearity(model, W, normalization="unit"):
    """Per-field grad(lambda).r with a GN / LD / near-degenerate label."""
    rep = eigenstructure(model, W, normalization=normalization, with_gn=False)
    if not rep.strictly_hyperbolic:
        raise DomainError("genuine nonlinearity needs a strictly hyperbolic state")
    vals = _gn_values(model, W, rep.eigenvalues, rep.right_vectors)
    scale = 1 + np.max(np.abs(rep.eigenvalues))
    return [FieldNonlinearity(float(v), _classify(v, scale)) for v in vals]


@dataclass
class SymmetrizerReport:
    xa_defect: float
    xd_defect: float
    xd_min_eig: float
    xd_rank: int
    det_x: float
    det_d: float
    det_xd: float


def symmetrizer_report(model, W):
    X = models.entropy_pack(model, W).hessian
    A = models.jacobian(model, W)
    D = models.diffusion(model, W)
    XA, XD = X @ A, X @ D
    sym = 0.5 * (XD + XD.T)
    ev = np.linalg.eigvalsh(sym)
    tol = 1e-10 * max(1.0, np.max(np.abs(ev)))
    return SymmetrizerReport(
        xa_defect=float(np.linalg.norm(XA - XA.T)),
        xd_defect=float(np.linalg.norm(XD - XD.T)),
        xd_min_eig=float(ev[0]),
        xd_rank=int(np.sum(np.abs(ev) > tol)),
        det_x=float(np.linalg.det(X)),
        det_d=float(np.linalg.det(D)),
        det_xd=float(np.linalg.det(XD)),
    )


@dataclass
class KSReport:
    norms: np.ndarray
    d_times_r: np.ndarray  # columns D r_k
    passes: list


def kawashima_shizuta(model, W, normalization="unit"):
    """|D r_k| per field; a field fails when r_k lies in ker D."""
    rep = eigenstructure(model, W, normalization=normalization, with_gn=False)
    D = models.diffusion(model, W)
    DR = D @ rep.right_vectors
    norms = np.linalg.norm(DR, axis=0)
    thresh = 1e-12 * np.linalg.norm(D)
    return KSReport(norms, DR, [bool(x > thresh) if thresh > 0 else False for x in norms])


def majda_pego_scan(model, W, xi_max=50.0, n_xi=200, A=None, D=None):
    """Largest delta with max Re eig(-P(xi)) <= -delta xi^2 on a log grid.

    P(xi) = i xi A + xi^2 D.  A and D default to the model's Jacobian and
    diffusion at W but can be passed explicitly.
    """
    if not xi_max > 1e-3:
        raise DomainError("xi_max must exceed the smallest grid point 1e-3")
    if A is None:
        A = models.jacobian(model, W)
    if D is None:
        D = models.diffusion(model, W)
    xis = np.geomspace(1e-3, xi_max, n_xi)
    delta = np.inf
    for xi in xis:
        try:
            ev = np.linalg.eigvals(-(1j * xi * A + xi * xi * D))
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"eigensolver failed at xi={xi}") from exc
        delta = min(delta, -np.max(ev.real) / xi**2)
    return float(delta)


@dataclass
class DsymInterval:
    theta1: float
    theta2: float
    confirmed: bool


def _dsym_pd(rho, u, theta):
    D = models.diffusion(Model.burgers(theta), models.burgers_state(rho, u))
    return bool(np.all(np.linalg.eigvalsh(0.5 * (D + D.T)) > 0))


def dsym_interval_burgers(W):
    """Temperatures for which the symmetric part of the Burgers D is positive definite.

    Returns (theta1, theta2) with theta2 = inf when the interval is unbounded.
    """
    rho, u = models.to_primitive(Model.burgers(), W)
    if not rho > 0:
        raise DomainError("the interval needs rho > 0")
    r = 1 + rho
    lam = np.sqrt(rho * r * u * u)
    t1 = lam / (r * r * (lam + 2))
    t2 = lam / (r * r * (lam - 2)) if lam > 2 else np.inf
    ok = True
    if t1 > 0:
        ok &= not _dsym_pd(rho, u, t1 * (1 - 1e-3)) and _dsym_pd(rho, u, t1 * (1 + 1e-3))
    if np.isfinite(t2):
        ok &= _dsym_pd(rho, u, t2 * (1 - 1e-3)) and not _dsym_pd(rho, u, t2 * (1 + 1e-3))
    return DsymInterval(float(t1), float(t2), bool(ok))


@dataclass
class PegoReport:
    l_d_r: float
    redet_max: float  # nan when theta = 0
    d_r: np.ndarray
    right: np.ndarray
    left: np.ndarray


def pego_matrix(xi, nu, dp, theta, lam):
    """Reduced 2x2 matrix of the fast-mode operator restricted to the lambda_+ plane."""
    a = 1 - nu
    return np.array([
        [1j * xi * a * lam - nu * a * dp, -1j * xi * lam + nu * a * dp + theta * nu * nu],
        [1j * xi * a * (dp - theta) + theta * lam * a, -1j * xi * (dp - theta)],
    ])


def pego_quantities_euler(W, law, theta, xi_max=50.0, n_xi=201):
    """l_+ D r_+ and the max over xi of Re det M, evaluated in the comoving frame.

    r_+ is scaled to first component 1 and l_+ to first component p'(n).
    """
    model = Model.euler(law, theta)
    n, rho, _ = models.to_primitive(model, W)
    if not (n > 0 and rho > 0):
        raise DomainError("needs n > 0 and rho > 0")
    W0 = models.euler_state(n, rho, 0.0)
    A = models.jacobian(model, W0)
    D = models.diffusion(model, W0)
    lam = eigenvalues(model, W0)[2]
    right, left = _null_pair(A, lam)
    _, dp, _ = law.eval(n)
    right = right / right[0]
    left = left * dp / left[0]
    Dr = D @ right
    ldr = float(left @ Dr)
    redet = np.nan
    if theta > 0:
        nu = n / (n + rho)
        xis = np.linspace(-xi_max, xi_max, n_xi)
        redet = max(np.linalg.det(pego_matrix(x, nu, dp, theta, lam)).real for x in xis)
    return PegoReport(ldr, float(redet), Dr, right, left)


@dataclass
class StabilityReport:
    symmetrizer: SymmetrizerReport
    ks: KSReport
    majda_pego_delta: float
    dsym_interval: DsymInterval | None = None
    pego: PegoReport | None = None


def stability_report(model, W, xi_max=50.0, n_xi=200):
    W = np.asarray(W, dtype=float)
    dsym = pego = None
    if model.kind == BURGERS:
        if W[0] > 0:
            dsym = dsym_interval_burgers(W)
    else:
        pego = pego_quantities_euler(W, model.law, model.theta, xi_max)
    return StabilityReport(
        symmetrizer=symmetrizer_report(model, W),
        ks=kawashima_shizuta(model, W),
        majda_pego_delta=majda_pego_scan(model, W, xi_max, n_xi),
        dsym_interval=dsym,
        pego=pego,
    )
