import os

import numpy as np
import pytest

from retrostate.multiport import MultiportUnitary, haar_unitary

SEED = int(os.environ.get("RETRO_SEED", "20031103"))

G1 = -1 / np.sqrt(2) - 1j * np.sqrt(np.sqrt(2) - 0.5)
ROOTS_012 = np.array([G1, np.conj(G1)])  # roots for |0> + |1> + |2>


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_coeffs(rng, N, real=False):
    c = rng.normal(size=N + 1)
    if not real:
        c = c + 1j * rng.normal(size=N + 1)
    return c


def haar_with_floor(rng, dim, floor=0.05):
    """Haar unitary whose first column has every modulus >= floor."""
    while True:
        U = haar_unitary(dim, rng)
        if np.min(np.abs(U[:, 0])) >= floor:
            return MultiportUnitary(U, "haar")


def random_roots(rng, N, radius=3.0):
    r = radius * np.sqrt(rng.uniform(size=N))
    return r * np.exp(2j * np.pi * rng.uniform(size=N))
