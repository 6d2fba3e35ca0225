import random

import pytest

from quiverk3 import CurveConfig


@pytest.fixture
def elliptic_pair():
    # two elliptic curves meeting twice
    return CurveConfig(((0, 2), (2, 0)), (1, 1), (1, 1), (1, 1))


@pytest.fixture
def affine_a1():
    # two (-2)-curves meeting twice: the doubled Kronecker quiver
    return CurveConfig(((-2, 2), (2, -2)), (1, 1), (1, 1), (1, 1))


@pytest.fixture
def affine_a1_22():
    return CurveConfig(((-2, 2), (2, -2)), (1, 1), (2, 2), (1, 1))


@pytest.fixture
def ogrady():
    # a single genus-2 curve with multiplicity 2
    return CurveConfig(((2,),), (1,), (2,), (1,))


@pytest.fixture
def one_loop():
    # a single elliptic curve: one vertex, one loop
    return CurveConfig(((0,),), (1,), (1,), (1,))


def random_config(
    rng: random.Random,
    s_min: int = 1,
    s_max: int = 5,
    gram_bound: int = 6,
    mult_max: int = 3,
) -> CurveConfig:
    """Seeded random valid configuration: even diagonal >= -2, non-negative
    off-diagonal, equal slopes enforced by chi_i = t * d_i."""
    s = rng.randint(s_min, s_max)
    gram = [[0] * s for _ in range(s)]
    for i in range(s):
        gram[i][i] = 2 * rng.randint(-1, gram_bound // 2)
        for j in range(i + 1, s):
            gram[i][j] = gram[j][i] = rng.randint(0, gram_bound)
    mult = tuple(rng.randint(1, mult_max) for _ in range(s))
    h0deg = tuple(rng.randint(1, 3) for _ in range(s))
    t = rng.choice([x for x in range(-3, 4) if x != 0])
    chi = tuple(t * d for d in h0deg)
    return CurveConfig(tuple(tuple(r) for r in gram), chi, mult, h0deg)
