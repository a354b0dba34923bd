import numpy as np
import pytest

from hyperball.core_math import random_orthonormal
from hyperball.projection import ProjectionBasis, fresh_state


def random_state(n_dims, seed, zoom=1.0):
    rng = np.random.default_rng(seed)
    basis = ProjectionBasis(random_orthonormal(n_dims, 3, rng), np.zeros(n_dims))
    return fresh_state(basis, zoom=zoom)


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
