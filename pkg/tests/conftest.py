import numpy as np
import pytest


def random_rates(rng, n=1):
    """Uniform samples from the valid qutrit rate region."""
    out = []
    while len(out) < n:
        g = rng.random(3)
        if g[1] + g[2] <= 1.0:
            out.append(tuple(float(x) for x in g))
    return out


def random_state(rng, d=3, rank=None):
    rank = d if rank is None else rank
    a = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
