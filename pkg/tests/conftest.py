import numpy as np
import pytest

from unitomo import expm, haar_random, random_generator


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_unitary_pair(d, rng):
    return haar_random(d, rng), haar_random(d, rng)


def unitary_near_identity(d, rng, radius):
    """Uniform-direction generator of norm <= radius, exponentiated."""
    scale = radius * rng.random()
    return expm(random_generator(d, rng, norm=scale))
