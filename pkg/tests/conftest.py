import random

import pytest

from latticeset.geometry import PointSet


@pytest.fixture
def cube2():
    """[2]^3: all eight vertices of the unit cube shifted to 1-based."""
    return PointSet.full_grid(2, 3)


@pytest.fixture
def grid3():
    """[3]^2: the 3x3 grid with its classic 8 lines."""
    return PointSet.full_grid(3, 2)


def random_pointset(seed, n, d, k):
    """k distinct random points of [n]^d; plain stdlib RNG, test data only."""
    rng = random.Random(seed)
    pts = set()
    while len(pts) < k:
        pts.add(tuple(rng.randint(1, n) for _ in range(d)))
    return PointSet.build(n, d, sorted(pts))
