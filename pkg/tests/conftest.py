import numpy as np
import pytest

from periodic_dirichlet import BoundaryData, discretize, make_curve, solve


@pytest.fixture(scope="session")
def disk():
    return make_curve("disk", radius=1.0)


@pytest.fixture(scope="session")
def star():
    return make_curve("star", r0=1.0, amp=0.3, m=5)


@pytest.fixture(scope="session")
def cos_data():
    return BoundaryData(0.0, (1.0,))


@pytest.fixture(scope="session")
def disk_cos_02(disk, cos_data):
    """Direct solve: disk, g = cos t, eps = 0.2, w = (1/2, 1/2), N = 128."""
    density, system = solve(disk, discretize(128), cos_data, 0.2)
    return density, system


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
