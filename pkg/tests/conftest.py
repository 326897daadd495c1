import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fpshock import models

settings.register_profile(
    "fpshock", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fpshock")


@pytest.fixture
def gamma2():
    return models.GammaLaw(1.0, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)



@pytest.fixture(scope="session")
def comoving_runs():
    """Zero-perturbation evolutions of the temperature-less Euler profile, keyed by cell count."""
    from helpers import comoving_run
    return comoving_run


def pytest_terminal_summary(terminalreporter):
    from helpers import VERDICTS
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
