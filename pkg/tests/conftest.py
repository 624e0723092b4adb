import hypothesis
import numpy as np
import pytest

from fnlslab import Grid, continuation_in_s

hypothesis.settings.register_profile(
    "ci", max_examples=25, deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow],
)
hypothesis.settings.load_profile("ci")


DESK_GRID = Grid(4096, 40.0)


@pytest.fixture(scope="session")
def desk_grid():
    return DESK_GRID


@pytest.fixture(scope="session")
def desk_chain():
    """Ground states at s = 0.9 .. 0.5 on a small grid, computed once."""
    states = continuation_in_s(0.5, 1.0, DESK_GRID)
    return {round(st.s, 3): st for st in states}


@pytest.fixture(scope="session")
def desk_gs06(desk_chain):
    return desk_chain[0.6]


@pytest.fixture(scope="session")
def desk_gs09(desk_chain):
    return desk_chain[0.9]


@pytest.fixture
def rng():
    return np.random.default_rng(20240715)
