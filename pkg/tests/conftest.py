import math

import pytest

SQRT_PI = math.sqrt(math.pi)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(1234)
