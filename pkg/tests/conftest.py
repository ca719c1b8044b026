import numpy as np
import pytest
from hypothesis import settings

# numba compiles the tridiagonal kernel on first use; keep that out of deadlines
settings.register_profile("quickfv", deadline=None, max_examples=60)
settings.load_profile("quickfv")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
