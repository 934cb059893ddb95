import math

import pytest

import solidsum as ss

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


@pytest.fixture
def square():
    return ss.load_polytope(2, [(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def triangle():
    return ss.sqrt3_triangle()


@pytest.fixture
def tetrahedron():
    return ss.load_polytope(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])


@pytest.fixture
def golden_segment():
    return ss.load_polytope(1, [(0.0,), (GOLDEN,)])


@pytest.fixture
def golden_rectangle():
    return ss.load_polytope(2, [(0, 0), (GOLDEN, 0), (GOLDEN, 1), (0, 1)])


@pytest.fixture
def quadrant():
    return ss.simple_cone([0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]])


def random_pointed_cone_2d(rng, min_cross=0.1):
    while True:
        g = rng.normal(size=(2, 2))
        if abs(g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]) > min_cross:
            return ss.simple_cone([0.0, 0.0], g)


def random_pole_free_s(rng, d, cones, imag=0.25):
    """Random complex argument kept safely away from denominator zeros."""
    while True:
        s = rng.uniform(0.1, 0.4, size=d) + 1j * rng.uniform(-imag, imag, size=d)
        if ss.pole_distance(cones, s) > 0.05:
            return s
