import pytest

from attackreduce import build_context
from attackreduce.fixtures import water_tank


@pytest.fixture(scope="session")
def tank():
    g, s, a, al = water_tank()
    return g, s, a, al


@pytest.fixture(scope="session")
def tank_ctx(tank):
    g, s, _, al = tank
    return build_context(g, s, al)


@pytest.fixture(scope="session")
def tank_attacker(tank, tank_ctx):
    from attackreduce.reduction import as_attacker
    return as_attacker(tank[2], tank_ctx)
