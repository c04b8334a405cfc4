import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_self_map(rng, min_offset=0.05, max_offset=0.7):
    """A generic validated self-map with nonzero b and c."""
    from cnops.moebius import LinearFractionalMap

    gamma = np.exp(2j * np.pi * rng.uniform())
    w = rng.uniform(min_offset, max_offset) * np.exp(2j * np.pi * rng.uniform())
    r = rng.uniform(0.2, 0.95)
    if rng.uniform() < 0.5:
        return LinearFractionalMap(r * gamma, -gamma * w, -r * np.conj(w), 1.0)
    return LinearFractionalMap(r * gamma, -r * gamma * w, -np.conj(w), 1.0)
