import numpy as np
import pytest

# fixed once for the whole suite; never tuned per test
BASE_SEED = 12345


@pytest.fixture
def rng():
    return np.random.default_rng(BASE_SEED)
