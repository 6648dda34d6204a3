"""Shared fixtures for the conestab test suite."""
from fractions import Fraction

import pytest

from src.models.domain import SampleDomain
from src.services.cone_instances import (
    NormKind,
    make_extended_reals,
    make_interval_cone,
    make_vector_uc,
)


@pytest.fixture
def ext_reals():
    return make_extended_reals()


@pytest.fixture
def nonneg_reals():
    return make_extended_reals(nonneg=True)


@pytest.fixture
def intervals():
    return make_interval_cone()


@pytest.fixture
def vector_sup_1():
    return make_vector_uc(1, NormKind.SUP)


@pytest.fixture
def vector_sup_3():
    return make_vector_uc(3, NormKind.SUP)


@pytest.fixture
def vector_euclid_2():
    return make_vector_uc(2, NormKind.EUCLIDEAN)


@pytest.fixture
def small_domain():
    """Points 0..4 and their pair sums, closed under doubling to depth 24."""
    return SampleDomain.build([Fraction(k) for k in range(1, 5)], depth=24)
