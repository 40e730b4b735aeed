import pytest
from hypothesis import HealthCheck, settings

from twoarm.arms import BanditModel, bernoulli, gaussian

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def easy():
    return BanditModel(gaussian(0.5, 0.25), gaussian(0.0, 0.25))


@pytest.fixture(scope="session")
def difficult():
    return BanditModel(gaussian(0.01, 0.25), gaussian(0.0, 0.25))


@pytest.fixture(scope="session")
def bern64():
    return BanditModel(bernoulli(0.6), bernoulli(0.4))
