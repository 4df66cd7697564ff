import numpy as np
import pytest

from bfvlab import BfvParams, RingParams


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


@pytest.fixture
def small_params() -> BfvParams:
    """Fast parameters with t | q, so plaintext scaling is exact."""
    return BfvParams(ring=RingParams(d=64, q=2**30), t=256)


@pytest.fixture
def small_prime_t_params() -> BfvParams:
    """Fast parameters with a prime t that does not divide q."""
    return BfvParams(ring=RingParams(d=64, q=2**30), t=83)
