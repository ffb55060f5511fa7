import numpy as np
import pytest

from holointerp import WeightedCouple


def random_couple(rng, dim=None, normalized=False) -> WeightedCouple:
    """Random couple with weights spread over a few decades."""
    if dim is None:
        dim = int(rng.integers(1, 17))
    w0 = np.exp(rng.uniform(-2.0, 2.0, dim))
    w1 = np.exp(rng.uniform(-2.0, 2.0, dim))
    if normalized:
        w1 = np.maximum(w1, w0)  # w0 <= w1 per coordinate => embed const <= 1
        w1 = w1 * (np.max(w0 / w1)) ** 0  # keep as is; fix max ratio below
        k = int(np.argmax(w0 / w1))
        w1[k] = w0[k]  # make the embedding constant exactly 1
    return WeightedCouple(dim, w0, w1)


def random_vector(rng, dim) -> np.ndarray:
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
