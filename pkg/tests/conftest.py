import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def random_density(rng, rank=4, dim=4):
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_hermitian(rng, dim=4):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return g + g.conj().T


def random_x_state(rng):
    """Random X state: two independent 2x2 PSD blocks on {|11>,|00>} and {|10>,|01>}."""
    m = np.zeros((4, 4), dtype=complex)
    w = rng.dirichlet(np.ones(2))
    for weight, idx in zip(w, ((0, 3), (1, 2))):
        b = random_density(rng, rank=rng.integers(1, 3), dim=2) * weight
        m[np.ix_(idx, idx)] = b
    return m
