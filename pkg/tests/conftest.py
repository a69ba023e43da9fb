"""Shared geometries and branes for the test suite."""

from fractions import Fraction

import pytest

from syzmirror import BraneSpec, ToricCYData


@pytest.fixture
def c3():
    return ToricCYData(rays=((0, 0, 1), (1, 0, 1), (0, 1, 1)), u=(0, 0, 1),
                       max_cones=((0, 1, 2),))


@pytest.fixture
def conifold():
    # resolved conifold, diagonal triangulation through rays 0 and 2
    return ToricCYData(
        rays=((0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)),
        u=(0, 0, 1),
        max_cones=((0, 1, 2), (0, 2, 3)),
    )


@pytest.fixture
def kp2():
    # total space of the canonical bundle over P^2
    return ToricCYData(
        rays=((0, 0, 1), (1, 0, 1), (0, 1, 1), (-1, -1, 1)),
        u=(0, 0, 1),
        max_cones=((0, 1, 2), (0, 2, 3), (0, 1, 3)),
    )


def av_brane(i0, i1, i2, m, c=Fraction(1), frame=((1, 0), (-1, 1)), m0=None):
    """Canonical AV brane: rows (e_i1-e_i0, e_i2-e_i0), constant on the second."""
    def diff(a, b):
        return tuple(
            (1 if j == a else 0) - (1 if j == b else 0) for j in range(m)
        )

    return BraneSpec(
        charges=(diff(i1, i0), diff(i2, i0)),
        constants=(Fraction(0), Fraction(c)),
        phases=(Fraction(0), Fraction(0)),
        av_indices=(i0, i1, i2),
        m0=m0,
        frame_generators=frame,
    )


@pytest.fixture
def conifold_brane():
    # charges (e2-e0, e1-e0), whose equations read z2 = 1 and z1 = Q0
    return av_brane(0, 2, 1, m=4, c=Fraction(2))


@pytest.fixture
def c3_brane():
    return av_brane(0, 2, 1, m=3, c=Fraction(1), frame=((1,),))


@pytest.fixture
def kp2_leg_brane():
    # brane on the leg F_{1,2} with the outer auxiliary index 3
    return av_brane(1, 2, 3, m=4, c=Fraction(1))


@pytest.fixture
def kp2_edge_brane():
    # brane on the bounded edge F_{0,2} of the compact divisor triangle;
    # geometric placement (m0) is exercised separately with offsets
    return av_brane(0, 2, 1, m=4, c=Fraction(1, 2))
