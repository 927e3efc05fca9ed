import pytest

from twoassoc.core.errors import ShapeError
from twoassoc.core.trees import (LEAF, collapse, compositions, contract_edge, corolla, enum_k, euler_char,
                                 f_vector, format_tree, graft_k, k_dim, k_poset, parse_tree)


@pytest.mark.parametrize("r, count", [(1, 1), (2, 1), (3, 3), (4, 11), (5, 45), (6, 197)])
def test_stratum_counts(r, count):
    assert len(enum_k(r)) == count


@pytest.mark.parametrize("r, expected", [(3, (2, 1)), (4, (5, 5, 1)), (5, (14, 21, 9, 1))])
def test_f_vectors(r, expected):
    assert f_vector([k_dim(t) for t in enum_k(r)]) == expected


@pytest.mark.parametrize("r", range(1, 7))
def test_euler_characteristic(r):
    assert euler_char([k_dim(t) for t in enum_k(r)]) == 1


def test_top_stratum_first():
    for r in range(2, 6):
        strata = enum_k(r)
        assert strata[0] == corolla(r)
        assert k_dim(strata[0]) == r - 2
        assert all(t.is_stable() for t in strata)


def test_text_form():
    tree = parse_tree("((x,x),x,(x,x))")
    assert tree.leaves == 5
    assert format_tree(tree) == "((x,x),x,(x,x))"
    assert format_tree(LEAF) == "x"
    with pytest.raises(ValueError):
        parse_tree("(x,x")
    with pytest.raises(ValueError):
        parse_tree("(x,x)x")


def test_graft():
    assert graft_k(corolla(2), corolla(2), 1) == parse_tree("((x,x),x)")
    assert graft_k(corolla(2), corolla(2), 2) == parse_tree("(x,(x,x))")
    assert graft_k(LEAF, corolla(3), 1) == corolla(3)
    with pytest.raises(ShapeError):
        graft_k(corolla(2), corolla(2), 3)


def test_contract_and_collapse():
    tree = parse_tree("((x,x),x)")
    assert contract_edge(tree, (1, 2)) == corolla(3)
    assert collapse(tree, (1, 2)) == corolla(2)
    nested = parse_tree("(x,((x,x),x))")
    assert contract_edge(nested, (2, 3)) == parse_tree("(x,(x,x,x))")
    with pytest.raises(ShapeError):
        contract_edge(tree, (2, 3))


def test_k3_poset():
    assert k_poset(3) == {
        "(x,x,x)": [],
        "((x,x),x)": ["(x,x,x)"],
        "(x,(x,x))": ["(x,x,x)"],
    }


def test_compositions():
    assert list(compositions(3, min_parts=2)) == [(1, 1, 1), (1, 2), (2, 1)]
    assert list(compositions(0, min_parts=0)) == [()]


def test_invalid_width():
    with pytest.raises(ShapeError):
        enum_k(0)
    with pytest.raises(ShapeError):
        corolla(0)
