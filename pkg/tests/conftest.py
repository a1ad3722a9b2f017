"""
Shared fixtures: library distributions, seeded RNGs and the bundled problems.
"""

import random
from pathlib import Path

import pytest
from sympy import QQ

from geometry import adapted_frame, contact, engel, flat, integrable, martinet, toy
from jets import PolyCurve

PROBLEMS_DIR = Path(__file__).resolve().parent.parent / "problems"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: toy-scale schedule and evaluation-backend checks")


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture
def problems_dir():
    return PROBLEMS_DIR


@pytest.fixture(scope="session")
def contact_D():
    return contact()


@pytest.fixture(scope="session")
def engel_D():
    return engel()


@pytest.fixture(scope="session")
def toy_D():
    return toy()


@pytest.fixture(scope="session")
def flat_D():
    return flat()


@pytest.fixture(scope="session")
def integrable_D():
    return integrable()


@pytest.fixture(scope="session")
def martinet_D():
    return martinet()


@pytest.fixture(scope="session")
def contact_frame(contact_D):
    return adapted_frame(contact_D)


@pytest.fixture(scope="session")
def engel_frame(engel_D):
    return adapted_frame(engel_D)


@pytest.fixture
def contact_curve():
    """(t, t, t^2/2), horizontal for dz - y dx"""
    return PolyCurve.from_coefficients([[0, 1], [0, 1], [0, 0, QQ(1, 2)]])


@pytest.fixture
def engel_curve():
    """(t, t^2/2, t^3/6, t), horizontal for dz - y dx and dy - w dx"""
    return PolyCurve.from_coefficients([[0, 1], [0, 0, QQ(1, 2)], [0, 0, 0, QQ(1, 6)], [0, 1]])
