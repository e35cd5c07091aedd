"""
Shared fixtures for the lab test suite
"""

import numpy as np
import pytest

from src.algebra.liealg import BlockPartition, SpectralParams, wedge
from src.core.config import config


@pytest.fixture(autouse=True)
def restore_tolerances():
    """Tests may override tolerances; put the table back afterwards"""
    saved = config.tolerances
    yield
    config.tolerances = saved


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def regular3():
    """A = diag(1, 2, 3), B = diag(2, 3, 5)"""
    return SpectralParams(BlockPartition.regular(3), (1.0, 2.0, 3.0), (2.0, 3.0, 5.0))


@pytest.fixture
def e12():
    return wedge(3, 0, 1)


@pytest.fixture
def e13():
    return wedge(3, 0, 2)


@pytest.fixture
def e23():
    return wedge(3, 1, 2)
