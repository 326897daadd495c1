import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from scipy import optimize

from fpshock import models, spectral
from fpshock.models import GammaLaw, Model

from helpers import random_burgers_states, random_euler_states

pos = st.floats(0.1, 10)
vel = st.floats(-5, 5)


def _gn_plus_oracle(n0, rho0, u0, theta0):
    """grad(lambda_+) . r_+ for the gamma=2 Euler model, symbolically."""
    n0, rho0, u0, theta0 = (sp.nsimplify(v) for v in (n0, rho0, u0, theta0))
    r, rho, w = sp.symbols("r rho w", real=True)
    n = r - rho
    u = w / r
    lam = u + sp.sqrt((n * 2 * n + theta0 * rho) / r)
    F = sp.Matrix([w, rho * w / r, w**2 / r + n**2 + theta0 * rho])
    A = F.jacobian([r, rho, w])
    at = {r: n0 + rho0, rho: rho0, w: (n0 + rho0) * u0}
    lam_val = lam.subs(at)
    vec = (A.subs(at) - lam_val * sp.eye(3)).nullspace(simplify=True)[0]
    vec = vec / vec[0]
    grad = sp.Matrix([lam]).jacobian([r, rho, w]).subs(at)
    return float(sp.N((grad * vec)[0], 20))


def test_burgers_eigenvalues_at_rest():
    rep = spectral.eigenstructure(Model.burgers(1.0), models.burgers_state(1.0, 0.0))
    assert np.allclose(rep.eigenvalues, [-np.sqrt(0.5), np.sqrt(0.5)], atol=1e-12, rtol=0)
    assert rep.eigenvalues[1] == pytest.approx(0.7071068, abs=5e-8)


def test_burgers_zero_density():
    rep = spectral.eigenstructure(Model.burgers(1.0), models.burgers_state(0.0, 1.0))
    assert np.allclose(rep.eigenvalues, [1, 2])
    assert rep.strictly_hyperbolic
    rep = spectral.eigenstructure(Model.burgers(1.0), models.burgers_state(0.0, 0.0))
    assert not rep.strictly_hyperbolic


def test_euler_eigenvalues_and_shift(gamma2):
    m = Model.euler(gamma2, 0.0)
    assert np.allclose(spectral.eigenvalues(m, models.euler_state(1, 1, 0)), [-1, 0, 1])
    assert np.allclose(spectral.eigenvalues(m, models.euler_state(1, 1, 2)), [1, 2, 3])


@pytest.mark.parametrize("theta", [0.0, 0.1, 1.0, 10.0])
def test_closed_form_matches_solver(theta, gamma2, rng):
    for model, W in ((Model.burgers(theta), random_burgers_states(rng, 200)),
                     (Model.euler(gamma2, theta), random_euler_states(rng, 200))):
        closed = spectral.eigenvalues(model, W)
        for k in range(W.shape[1]):
            num = spectral.solver_eigenvalues(model, W[:, k])
            scale = 1 + np.max(np.abs(closed[:, k]))
            assert np.max(np.abs(num - closed[:, k])) <= 1e-10 * scale


@given(pos, pos, vel, st.sampled_from([0.0, 1.0]))
def test_eigenvectors_biorthogonal(n, rho, u, theta):
    m = Model.euler(GammaLaw(1.0, 2.0), theta)
    W = models.euler_state(n, rho, u)
    rep = spectral.eigenstructure(m, W, with_gn=False)
    assert np.allclose(rep.left_vectors @ rep.right_vectors, np.eye(3), atol=1e-8)
    A = models.jacobian(m, W)
    for i, lam in enumerate(rep.eigenvalues):
        res = (A - lam * np.eye(3)) @ rep.right_vectors[:, i]
        assert np.linalg.norm(res) <= 1e-8 * (1 + np.linalg.norm(A))


def test_gn_plus_field_value(gamma2):
    oracle = _gn_plus_oracle(1.0, 1.0, 0.0, 1.0)
    assert oracle == pytest.approx(0.8164966, abs=5e-8)  # 2 / sqrt(6)
    fields = spectral.genuine_nonlinearity(Model.euler(gamma2, 1.0), models.euler_state(1, 1, 0),
                                           normalization="first")
    assert fields[2].value == pytest.approx(oracle, abs=1e-6)
    assert [f.kind for f in fields] == ["GN", "LD", "GN"]


@given(pos, pos, vel, st.sampled_from([0.0, 0.5, 2.0]))
def test_euler_middle_field_linearly_degenerate(n, rho, u, theta):
    fields = spectral.genuine_nonlinearity(Model.euler(GammaLaw(1.0, 2.0), theta),
                                           models.euler_state(n, rho, u))
    assert fields[1].kind == "LD"


def test_burgers_gn_signs():
    fields = spectral.genuine_nonlinearity(Model.burgers(1.0), models.burgers_state(1.0, 0.0))
    assert fields[0].value < 0 < fields[1].value


def _primitive_directional(model, W, i, normalization="first"):
    """grad_U mu . s in primitive variables, with s = dU/dW r."""
    rep = spectral.eigenstructure(model, W, normalization=normalization, with_gn=False)
    U = models.to_primitive(model, W)
    to_prim = lambda x: models.to_primitive(model, x)
    from fpshock._numerics import fd_jacobian
    s = fd_jacobian(to_prim, W) @ rep.right_vectors[:, i]
    mu = lambda x: spectral.eigenvalues(model, models.from_primitive(model, x))[i]
    grad = fd_jacobian(lambda x: np.atleast_1d(mu(x)), U)[0]
    return grad @ s, rep


def test_directional_derivative_frame_invariance(gamma2, rng):
    cases = [(Model.burgers(1.0), random_burgers_states(rng, 50)),
             (Model.euler(gamma2, 0.5), random_euler_states(rng, 50))]
    for model, Ws in cases:
        for k in range(Ws.shape[1]):
            W = Ws[:, k]
            for i in range(model.m):
                prim, rep = _primitive_directional(model, W, i)
                grads = spectral.eigenvalue_gradients(model, W)
                cons = grads[i] @ rep.right_vectors[:, i]
                assert cons == pytest.approx(prim, abs=1e-6 * (1 + abs(prim)))


@given(pos, pos, vel, st.floats(-3, 3), st.sampled_from([0.0, 1.0]))
def test_euler_galilean_shift(n, rho, u, u0, theta):
    m = Model.euler(GammaLaw(1.0, 2.0), theta)
    a = spectral.eigenstructure(m, models.euler_state(n, rho, u), "first", with_gn=False)
    b = spectral.eigenstructure(m, models.euler_state(n, rho, u + u0), "first", with_gn=False)
    assert np.allclose(b.eigenvalues, a.eigenvalues + u0, atol=1e-12, rtol=0)
    assert np.allclose(b.right_vectors[:2], a.right_vectors[:2], atol=1e-8)


def test_burgers_not_galilean_invariant():
    m = Model.burgers(1.0)
    a = spectral.eigenvalues(m, models.burgers_state(1.0, 0.0))
    b = spectral.eigenvalues(m, models.burgers_state(1.0, 1.0))
    assert not np.allclose(b, a + 1.0, atol=1e-3)


def test_symmetrizer_burgers():
    rep = spectral.symmetrizer_report(Model.burgers(1.0), models.burgers_state(1.0, 0.0))
    assert rep.xa_defect <= 1e-12 and rep.xd_defect <= 1e-12 and rep.xd_min_eig > 0
    rho, r, th = 2.0, 3.0, 1.0
    oracle = (th / (rho * r)) * (th**2 * rho / r**3)
    assert oracle == pytest.approx(1 / 81, rel=1e-15)
    rep = spectral.symmetrizer_report(Model.burgers(th), models.burgers_state(rho, 0.0))
    assert rep.det_xd == pytest.approx(1 / 81, rel=1e-12)
    assert rep.det_xd == pytest.approx(rep.det_x * rep.det_d, rel=1e-12)


@pytest.mark.parametrize("theta,rank", [(0.0, 1), (1.0, 2)])
def test_symmetrizer_euler_rank(gamma2, theta, rank):
    rep = spectral.symmetrizer_report(Model.euler(gamma2, theta), models.euler_state(1.0, 1.0, 0.3))
    assert rep.xa_defect <= 1e-10 and rep.xd_defect <= 1e-10
    assert rep.xd_rank == rank
    assert rep.xd_min_eig >= -1e-12
    if theta == 0:
        assert abs(rep.xd_min_eig) <= 1e-12


def test_kawashima_shizuta(gamma2):
    W = models.euler_state(1.0, 1.0, 0.0)
    hot = spectral.kawashima_shizuta(Model.euler(gamma2, 1.0), W)
    assert all(hot.passes) and np.min(hot.norms) > 0
    cold = spectral.kawashima_shizuta(Model.euler(gamma2, 0.0), W, normalization="first")
    assert cold.norms[1] <= 1e-12
    assert cold.passes == [True, False, True]
    nu, dp = 0.5, 2.0
    for k in (0, 2):
        assert cold.d_times_r[1, k] == pytest.approx(-nu**2 * (1 - nu) * dp, abs=1e-12)


def test_majda_pego():
    m = Model.burgers(1.0)
    W = models.burgers_state(1.0, 0.0)
    assert spectral.majda_pego_scan(m, W, 50, 200) > 0
    assert spectral.majda_pego_scan(m, W, 50, 200, D=np.zeros((2, 2))) <= 1e-12
    assert np.isfinite(spectral.majda_pego_scan(m, W, 2e-3, 2))


def _bisect_dsym_endpoint(rho, u, lo, hi):
    def det_sym(theta):
        D = models.diffusion(Model.burgers(theta), models.burgers_state(rho, u))
        return np.linalg.det(0.5 * (D + D.T))
    return optimize.brentq(det_sym, lo, hi, xtol=1e-15, rtol=1e-15)


def test_dsym_interval_examples():
    iv = spectral.dsym_interval_burgers(models.burgers_state(1.0, 2.0))
    assert (iv.theta1, iv.theta2) == pytest.approx((0.1464466, 0.8535534), abs=5e-8)
    assert iv.confirmed
    assert iv.theta1 == pytest.approx(_bisect_dsym_endpoint(1.0, 2.0, 0.05, 0.5), abs=1e-10)
    assert iv.theta2 == pytest.approx(_bisect_dsym_endpoint(1.0, 2.0, 0.5, 2.0), abs=1e-10)
    iv = spectral.dsym_interval_burgers(models.burgers_state(1.0, 1.0))
    assert iv.theta1 == pytest.approx(0.1035534, abs=5e-8) and iv.theta2 == np.inf
    iv = spectral.dsym_interval_burgers(models.burgers_state(3.0, 0.0))
    assert (iv.theta1, iv.theta2) == (0.0, np.inf)


def test_pego_quantities(gamma2):
    W = models.euler_state(1.0, 1.0, 0.0)
    cold = spectral.pego_quantities_euler(W, gamma2, 0.0)
    nu, dp = 0.5, 2.0
    assert cold.l_d_r == pytest.approx(nu**2 * (1 - nu) * dp**2, abs=1e-12)
    assert np.isnan(cold.redet_max)
    hot = spectral.pego_quantities_euler(W, gamma2, 1.0)
    lam = np.sqrt(1.5)
    assert hot.l_d_r == pytest.approx((1 - nu) * (nu**2 * (dp - 1) ** 2 + lam**2), abs=1e-12)
    assert hot.l_d_r == pytest.approx(0.875, abs=1e-12)
    assert np.allclose(hot.d_r, [0, -0.125, 0.6123724], atol=5e-8)
    assert np.allclose(hot.left, [2, -1, 1.2247449], atol=5e-8)
    assert hot.redet_max < 0
    moving = spectral.pego_quantities_euler(models.euler_state(1.0, 1.0, 2.5), gamma2, 1.0)
    assert moving.l_d_r == pytest.approx(hot.l_d_r, abs=1e-12)
