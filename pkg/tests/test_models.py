import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpshock import models
from fpshock._numerics import fd_jacobian
from fpshock.errors import DomainError
from fpshock.models import GammaLaw, Model, TabulatedLaw

pos = st.floats(0.1, 10)
vel = st.floats(-5, 5)
temps = st.sampled_from([0.0, 0.1, 1.0, 10.0])


@pytest.mark.parametrize("C,g,n,expected", [
    (1, 2, 0.0, (0, 0, 2)),
    (1, 2, 1.5, (2.25, 3, 2)),
    (2, 3, 2.0, (16, 24, 24)),
])
def test_gamma_law_values(C, g, n, expected):
    assert models.pressure_eval(GammaLaw(C, g), n) == pytest.approx(expected, abs=1e-14)


def test_pressure_inverse(gamma2):
    assert models.pressure_inverse(gamma2, 4.0) == pytest.approx(2.0, rel=1e-14)
    assert models.pressure_inverse(gamma2, 0.0) == 0.0
    assert models.pressure_inverse(gamma2, 1 + 3.0) == pytest.approx(2.0, rel=1e-14)


def test_negative_density_rejected(gamma2):
    with pytest.raises(DomainError):
        gamma2.eval(-1.0)


def test_gamma_law_rejects_bad_exponent():
    with pytest.raises(DomainError):
        GammaLaw(1.0, 1.0)


def _tab(C=1.5, g=2.5):
    return TabulatedLaw(lambda n: C * n**g, lambda n: C * g * n ** (g - 1),
                        lambda n: C * g * (g - 1) * n ** (g - 2))


def test_tabulated_matches_gamma_law():
    tab, ref = _tab(), GammaLaw(1.5, 2.5)
    for n in (0.3, 1.0, 4.0):
        assert tab.inverse(ref.eval(n)[0]) == pytest.approx(n, rel=1e-12)
        assert tab.dpotential(n) == pytest.approx(ref.dpotential(n), rel=1e-9)
        assert tab.potential(n) == pytest.approx(ref.potential(n), rel=1e-8)


def test_tabulated_rejects_concave_law():
    with pytest.raises(DomainError):
        TabulatedLaw(np.sqrt, lambda n: 0.5 / np.sqrt(n), lambda n: -0.25 * n**-1.5)


def test_potential_second_derivative(gamma2):
    # Pi'' = p'/n, checked by central differences of Pi'
    for law in (gamma2, GammaLaw(2.0, 1.4)):
        for n in np.linspace(0.2, 5, 25):
            h = 1e-6 * (1 + n)
            fd = (law.dpotential(n + h) - law.dpotential(n - h)) / (2 * h)
            assert fd == pytest.approx(law.eval(n)[1] / n, rel=1e-8)


def test_flux_examples(gamma2):
    b = Model.burgers(1.0)
    assert np.allclose(models.flux(b, [0.0, 0.0]), [0, 0], atol=0)
    assert np.allclose(models.flux(b, [1.0, 2.0]), [1, 3], atol=1e-15)
    e = Model.euler(gamma2, 0.0)
    assert np.allclose(models.flux(e, [2.0, 1.0, 0.0]), [0, 0, 1], atol=1e-15)


def test_jacobian_examples(gamma2):
    A = models.jacobian(Model.burgers(1.0), [1.0, 0.0])
    assert np.allclose(A, [[0, 0.5], [1, 0]], atol=1e-15)
    A = models.jacobian(Model.euler(gamma2, 0.0), [2.0, 1.0, 0.0])
    assert np.allclose(A, [[0, 0, 1], [0, 0, 0.5], [2, -2, 0]], atol=1e-15)


def test_diffusion_examples(gamma2):
    D = models.diffusion(Model.burgers(1.0), [1.0, 0.0])
    assert np.allclose(D, [[0.25, 0], [0, 0.5]], atol=1e-15)
    e = Model.euler(gamma2, 1.0)
    D0, D1 = models.diffusion_parts(e, [2.0, 1.0, 0.0])
    assert np.allclose(D0[1], [-0.5, 0.5, 0], atol=1e-15)
    assert np.allclose(np.diag(D1), [0, 0.25, 0.5], atol=1e-15)
    D = models.diffusion(Model.euler(gamma2, 0.0), [2.0, 1.0, 0.0])
    assert np.all(D[0] == 0)
    assert np.allclose(D, D0)


def test_inviscid_model_has_no_diffusion(gamma2):
    m = Model(models.EULER, 1.0, gamma2, viscous=False)
    assert np.all(models.diffusion(m, [2.0, 1.0, 0.5]) == 0)


def test_entropy_examples(gamma2):
    pack = models.entropy_pack(Model.burgers(1.0), [1.0, 0.0])
    assert pack.value == pytest.approx(0.0, abs=1e-15)
    assert np.allclose(pack.gradient, [1, 0])
    assert np.allclose(pack.hessian, [[1, 0], [0, 0.5]])
    pack = models.entropy_pack(Model.euler(gamma2, 1.0), [2.0, 1.0, 0.0])
    assert np.allclose(pack.hessian, [[2, -2, 0], [-2, 3, 0], [0, 0, 0.5]])


def test_entropy_needs_particles_when_hot():
    with pytest.raises(DomainError):
        models.entropy_pack(Model.burgers(1.0), [0.0, 1.0])


def test_primitive_examples(gamma2):
    assert np.allclose(models.to_primitive(Model.burgers(), [1.0, 2.0]), [1, 1])
    assert np.allclose(models.to_primitive(Model.euler(gamma2), [2.0, 1.0, -3.0]), [1, 1, -1.5])


def test_invalid_states(gamma2):
    with pytest.raises(DomainError):
        models.flux(Model.euler(gamma2), [1.0, 2.0, 0.0])  # n < 0
    with pytest.raises(DomainError):
        models.flux(Model.euler(gamma2), [0.0, 0.0, 0.0])  # r = 0
    with pytest.raises(DomainError):
        models.flux(Model.burgers(), [-0.5, 0.0])


def test_primitive_round_trip_batch(gamma2, rng):
    from helpers import random_burgers_states, random_euler_states
    for model, W in ((Model.burgers(), random_burgers_states(rng, 1000)),
                     (Model.euler(gamma2), random_euler_states(rng, 1000))):
        back = models.from_primitive(model, models.to_primitive(model, W))
        assert np.max(np.abs(back - W) / (1 + np.abs(W))) <= 1e-14


@given(pos, vel, temps)
def test_burgers_jacobian_matches_fd(rho, u, theta):
    m = Model.burgers(theta)
    W = models.burgers_state(rho, u)
    fd = fd_jacobian(lambda x: models.flux(m, x), W)
    assert np.allclose(models.jacobian(m, W), fd, atol=1e-6 * (1 + np.abs(fd).max()))


@given(pos, pos, vel, temps, st.floats(1.2, 3.0))
def test_euler_jacobian_matches_fd(n, rho, u, theta, gamma):
    m = Model.euler(GammaLaw(1.0, gamma), theta)
    W = models.euler_state(n, rho, u)
    fd = fd_jacobian(lambda x: models.flux(m, x), W)
    assert np.allclose(models.jacobian(m, W), fd, atol=1e-6 * (1 + np.abs(fd).max()))


@given(pos, pos, vel, st.sampled_from([0.1, 1.0, 10.0]))
def test_entropy_derivatives_match_fd(n, rho, u, theta):
    m = Model.euler(GammaLaw(1.0, 2.0), theta)
    W = models.euler_state(n, rho, u)
    pack = models.entropy_pack(m, W)
    grad = fd_jacobian(lambda x: np.atleast_1d(models.entropy_value(m, x)), W)[0]
    assert np.allclose(pack.gradient, grad, rtol=1e-6, atol=1e-6)
    hess = fd_jacobian(lambda x: models.entropy_pack(m, x).gradient, W)
    assert np.allclose(pack.hessian, hess, rtol=1e-5, atol=1e-6)
    assert np.allclose(pack.hessian, pack.hessian.T, atol=1e-15)
    assert np.all(np.linalg.eigvalsh(pack.hessian) > 0)


@given(pos, vel, st.sampled_from([0.1, 1.0, 10.0]))
def test_entropy_variables_locally_invertible(rho, u, theta):
    m = Model.burgers(theta)
    pack = models.entropy_pack(m, models.burgers_state(rho, u))
    assert np.linalg.cond(pack.hessian) < 1e12


def test_vectorised_flux_matches_pointwise(gamma2, rng):
    from helpers import random_euler_states
    m = Model.euler(gamma2, 0.5)
    W = random_euler_states(rng, 20)
    batch = models.flux(m, W)
    for k in range(20):
        assert np.allclose(batch[:, k], models.flux(m, W[:, k]), rtol=1e-15)
