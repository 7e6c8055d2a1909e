import pytest
from hypothesis import HealthCheck, settings

from lgcy.model import LGModel, subgroup_closure

settings.register_profile(
    "suite", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def m1():
    """Fermat quintic, G = <j>."""
    return subgroup_closure(LGModel((1, 1, 1, 1, 1), 5), [])


@pytest.fixture(scope="session")
def m2():
    """c = (1,1,2), d = 4, G = <j>."""
    return subgroup_closure(LGModel((1, 1, 2), 4), [])


@pytest.fixture(scope="session")
def m3():
    """Quintic with G = <j, (0,1,4,0,0)>, |G| = 25."""
    return subgroup_closure(LGModel((1, 1, 1, 1, 1), 5), [(0, 1, 4, 0, 0)])
