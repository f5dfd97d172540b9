import random

import pytest
from hypothesis import settings

from krylov_adjoint.rings import Integers, PrimeField

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def F7():
    return PrimeField(7)


@pytest.fixture
def F():
    return PrimeField(10007)


@pytest.fixture
def ZZ():
    return Integers()


@pytest.fixture
def rng():
    return random.Random(20240917)
