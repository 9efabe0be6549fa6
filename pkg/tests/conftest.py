import numpy as np
import pytest

from wdiv import CongruenceSpec, phases


@pytest.fixture(scope="session")
def pair_2_3():
    """Phases (1/2, 1/3): the standard scan configuration."""
    return phases(1, 2, 1, 3)


@pytest.fixture(scope="session")
def spec_1213():
    return CongruenceSpec(1, 2, 1, 3)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
