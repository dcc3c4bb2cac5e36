import numpy as np
import pytest

from envlab.space import Space


@pytest.fixture
def u3():
    """Three uniform atoms, p = 3."""
    return Space(3, 3.0, (1.0, 1.0, 1.0))


@pytest.fixture
def l1_3():
    return Space(3, 1.0, (1.0, 1.0, 1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
