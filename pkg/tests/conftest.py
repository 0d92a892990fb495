import math

import pytest

from presets.PresetProvider import PresetProvider
from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.fields import get_field
from services.lattices.models import Sector

ALL_DISCRIMINANTS = (-4, -8, -3, -7, -11, -19, -43, -67, -163)


@pytest.fixture(scope="session")
def presets():
    return PresetProvider()


@pytest.fixture(scope="session")
def gauss(presets):
    return presets.grid("gauss")


@pytest.fixture(scope="session")
def eisenstein(presets):
    return presets.grid("eisenstein")


@pytest.fixture(scope="session")
def qi():
    return get_field(-4)


@pytest.fixture(scope="session")
def q3():
    return get_field(-3)


@pytest.fixture
def gi(qi):
    """Гауссово целое по координатам (x, y) = x + y·i."""
    return lambda x, y=0: AlgInt(x, y, qi)


@pytest.fixture
def full_sector():
    return Sector(direction=1 + 0j, aperture=2 * math.pi, radius=0.0)
