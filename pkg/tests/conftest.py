import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


def random_zero_mean_amplitude(grid, rng, modes=8, scale=1.0):
    """Random band-limited zero-mean coefficients on a grid."""
    c = np.zeros(grid.n_points, dtype=complex)
    ks = range(1, modes + 1)
    for k in ks:
        c[k] = scale * (rng.standard_normal() + 1j * rng.standard_normal())
        c[-k] = scale * (rng.standard_normal() + 1j * rng.standard_normal())
    return c
