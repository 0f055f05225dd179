import numpy as np
import pytest

# numpy 2 renamed trapz; support both
trapezoid = getattr(np, "trapezoid", None) or np.trapz


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)
