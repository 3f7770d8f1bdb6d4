import numpy as np
import pytest


def relerr(a: float, b: float, floor: float = 1.0) -> float:
    """Relative error with an absolute floor for near-zero quantities."""
    return abs(a - b) / max(abs(a), abs(b), floor)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
