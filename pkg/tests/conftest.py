import numpy as np
import pytest

import em_manifold as em

# generic off-axis direction used across tests to avoid frame degeneracies
DIRECTION = np.array([1.0, 2.0, 0.7]) / np.linalg.norm([1.0, 2.0, 0.7])


@pytest.fixture(scope="session")
def med5g() -> em.Medium:
    return em.Medium(5e9)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
