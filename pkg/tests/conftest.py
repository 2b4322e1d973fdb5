import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from zeromodules.statespace import StateSpace

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SQRT2 = np.sqrt(2.0)


@pytest.fixture
def allpass():
    """(z - 1)/(z + 1)."""
    return StateSpace([[-1]], [[1]], [[-2]], [[1]])


@pytest.fixture
def row():
    """[1, 1/(z + 1)]."""
    return StateSpace([[-1]], [[0, 1]], [[1]], [[1, 0]])


@pytest.fixture
def column():
    """[1; 1/(z + 1)]."""
    return StateSpace([[-1]], [[1]], [[0], [1]], [[1], [0]])


@pytest.fixture
def const_row():
    """Constant [1, 1]."""
    return StateSpace(np.zeros((0, 0)), np.zeros((0, 2)), np.zeros((1, 0)), [[1, 1]])
settings.register_profile("stress", deadline=None, max_examples=400, suppress_health_check=[HealthCheck.too_slow])
