import pytest
from hypothesis import HealthCheck, settings

from bisyz.core import Ambient, Polarization
from bisyz.linsys import complete_system, monomial_system

settings.register_profile(
    "repo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

P1P1 = Ambient(1, 1)
L21 = Polarization(2, 1)
PURE_21 = ["x0^2 y0", "x0^2 y1", "x1^2 y0", "x1^2 y1"]


@pytest.fixture
def V1():
    return monomial_system(P1P1, L21, PURE_21 + ["x0 x1 y0"])


@pytest.fixture
def V2():
    return monomial_system(P1P1, L21, PURE_21 + ["x0 x1 y1"])


@pytest.fixture
def W1():
    return monomial_system(P1P1, L21, PURE_21)


@pytest.fixture
def W2():
    return complete_system(P1P1, L21)
