import random

import pytest

from trilie import LieDerPair, adjoint, derivation_space, example_algebra


@pytest.fixture(scope="session")
def example():
    return example_algebra()


@pytest.fixture(scope="session")
def der_basis(example):
    return derivation_space(example)


@pytest.fixture(scope="session")
def example_pairs(example, der_basis):
    """The example algebra with theta = 0 and with each derivation basis element."""
    return [LieDerPair(example)] + [LieDerPair(example, D) for D in der_basis]


@pytest.fixture(scope="session")
def adjoint_pair(example, der_basis):
    p = LieDerPair(example, der_basis[0])
    return p, adjoint(p)


@pytest.fixture
def rng():
    return random.Random(20240917)
