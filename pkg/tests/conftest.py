import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'code'))

from basis.hermite import BasisSpec  # noqa: E402
from basis.index_sets import enumerate_index_set  # noqa: E402
from geometry.domains import Domain  # noqa: E402
from geometry.sampling import generate_node_set  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def disk_nodes():
    """500 внутренних и 150 граничных узлов в единичном круге."""
    return generate_node_set(Domain.ball(2), 500, 150, seed=3)


@pytest.fixture
def quadratic_spec():
    """Gamma^4(2, 1): константа, x_j и x_j^2 по каждой координате."""
    return BasisSpec(enumerate_index_set(2, 1.0, 4), scale=1.0)
