import numpy as np


def random_burgers_states(rng, k):
    rho = rng.uniform(0.1, 10, k)
    u = rng.uniform(-5, 5, k)
    return np.stack([rho, (1 + rho) * u])


def random_euler_states(rng, k):
    n = rng.uniform(0.1, 10, k)
    rho = rng.uniform(0.1, 10, k)
    u = rng.uniform(-5, 5, k)
    return np.stack([n + rho, rho, (n + rho) * u])


COMOVING_EPS = 0.05
_RUNS = {}


def comoving_setup():
    from fpshock import models, profiles
    law = models.GammaLaw(1.0, 2.0)
    sharp = profiles.tau_sharp(3.0, profiles.RescaledPressure.of(law, 1.0))
    params = profiles.reduced_from(0.3 * sharp.tau_hash, 3.0, law)
    return params, profiles.profile_theta0(params)


def comoving_run(n_cells):
    """Cached zero-perturbation run of the comoving Euler profile on 128 profile units."""
    if n_cells not in _RUNS:
        from fpshock import evolve
        params, prof = comoving_setup()
        cfg = evolve.EvolveConfig(eps=COMOVING_EPS, t_end=1.0, snapshot_every=100)
        half = 64 * COMOVING_EPS
        run = evolve.perturb_and_evolve(params.model, prof, evolve.Perturbation(0.0, 0.1, 1),
                                        cfg, -half, half, n_cells)
        _RUNS[n_cells] = (params, prof, run)
    return _RUNS[n_cells]


VERDICTS = []


def verdict(tag, ok, detail):
    """Record and print a pass/fail line for one acceptance criterion, then assert it."""
    line = f"{tag:<6} {'PASS' if ok else 'FAIL'}  {detail}"
    VERDICTS.append(line)
    print(line)
    assert ok, line
