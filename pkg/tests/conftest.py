from fractions import Fraction

import pytest

from twoassoc.core.flowcat import FlowCat2, ModuliPoint
from twoassoc.core.gen import (gen_assoc_algebra, gen_square_zero, gen_strict_2cat, matrix_2cat, named_algebra,
                           z2_2cat)
from twoassoc.core.shapes import EvalGrid, make_collection, single_object_cat

# d x = y + w, d y = z, d w = z: the two paths x -> z cancel mod 2
DIAMOND_BASIS = ["x", "y", "w", "z"]
DIAMOND_MATRIX = [
    [0, 0, 0, 0],
    [1, 0, 0, 0],
    [1, 0, 0, 0],
    [0, 1, 1, 0],
]


def _unary_point(pid, source, target, energy):
    collection = make_collection(single_object_cat(), ("M", "M"), [[("e", "e")]])
    return ModuliPoint(pid, collection, EvalGrid((((source,),),), (target,)), Fraction(energy))


@pytest.fixture
def unary_point():
    """Factory for single-input points on the identity of the one-object category"""
    return _unary_point


@pytest.fixture
def chain_cat():
    """d x = y and d y = z, so d squared is T^2 on x -> z"""
    points = [_unary_point("dx", "x", "y", 1), _unary_point("dy", "y", "z", 1)]
    return FlowCat2(single_object_cat(), {g: ("e", "e") for g in "xyz"}, {p.id: p for p in points})


@pytest.fixture(scope="session")
def diamond_matrix():
    return DIAMOND_BASIS, DIAMOND_MATRIX


@pytest.fixture(scope="session")
def diamond_cat():
    return gen_square_zero(DIAMOND_BASIS, DIAMOND_MATRIX)


@pytest.fixture(scope="session")
def z2_algebra_cat():
    return gen_assoc_algebra(*named_algebra('z2'))


@pytest.fixture(scope="session")
def strict_z2_cat():
    return gen_strict_2cat(z2_2cat())


@pytest.fixture(scope="session")
def strict_matrix_cat():
    return gen_strict_2cat(matrix_2cat())
