import numpy as np
import pytest

from ctsim.hilbert import DensityOperator


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_density(rng, dims) -> DensityOperator:
    """Full-rank random state from a Ginibre matrix."""
    n = int(np.prod(dims))
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = g @ g.conj().T
    return DensityOperator(tuple(dims), m / np.trace(m).real)


def random_pure_density(rng, dims) -> DensityOperator:
    n = int(np.prod(dims))
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    v /= np.linalg.norm(v)
    return DensityOperator(tuple(dims), np.outer(v, v.conj()))
