import pytest

from twoassoc.core.errors import LabelingError, ShapeError
from twoassoc.core.labeling import assoc_check, cuts, decomposition_shapes, induced_labeling
from twoassoc.core.polytopes import codim, enum_fiber, is_shape_stable, parse_coppice, top_stratum
from twoassoc.core.shapes import Shape, ShapeBound, cell, format_collection, format_shape, symbolic_collection


def _stable_shapes(total, blocks):
    bound = ShapeBound(total, blocks, total)
    return [s for s in bound.shapes() if s.r + sum(s.masses) <= total and is_shape_stable(s)]


def test_induced_labeling_of_a_nested_bubble():
    shape = Shape.of([[3]])
    labeling = induced_labeling(symbolic_collection(shape), parse_coppice("x ; S[S[p,p],p]"))
    assert labeling[(1, (0,))] == (cell(1, 1, 0), cell(1, 1, 2), cell(1, 1, 3))
    assert labeling[(1, (0, 0, 0))] == (cell(1, 1, 0), cell(1, 1, 1), cell(1, 1, 2))


def test_labeling_needs_matching_shapes():
    with pytest.raises(LabelingError):
        induced_labeling(symbolic_collection(Shape.of([[2]])), parse_coppice("x ; S[p,p,p]"))


def test_decomposition_shapes_of_a_split_block():
    shape = Shape.of([[1, 1]])
    collection = symbolic_collection(shape)
    singles, multis = decomposition_shapes(collection, parse_coppice("(x,x) ; S[B<p|>,B<|p>]"))
    assert [x.shape for x in singles] == [Shape.of([[2]])]
    assert [x.shape for x in multis] == [Shape.of([[1, 0], [0, 1]])]


def test_top_stratum_is_its_own_decomposition():
    shape = Shape.of([[1, 1]])
    collection = symbolic_collection(shape)
    singles, multis = decomposition_shapes(collection, top_stratum(shape))
    assert singles == []
    assert [format_collection(x) for x in multis] == [format_collection(collection)]
    assert cuts(top_stratum(shape)) == []


@pytest.mark.parametrize("rows", [[[3]], [[4]], [[1, 1]], [[2, 0]]])
def test_decompositions_are_associative(rows):
    shape = Shape.of(rows)
    for c in enum_fiber(shape):
        assert assoc_check(shape, c, max_codim=3)


@pytest.mark.parametrize("shape", _stable_shapes(5, 2), ids=format_shape)
def test_low_codimension_decompositions_are_associative(shape):
    for c in enum_fiber(shape):
        if codim(c) <= 2:
            assert assoc_check(shape, c, max_codim=2)


def test_decomposition_shapes_are_not_shared():
    shape = Shape.of([[1, 1]])
    collection = symbolic_collection(shape)
    c = parse_coppice("(x,x) ; S[B<p|>,B<|p>]")
    singles, multis = decomposition_shapes(collection, c)
    singles.clear()
    multis.append(collection)
    again = decomposition_shapes(collection, c)
    assert [len(part) for part in again] == [1, 1]


def test_assoc_check_rejects():
    with pytest.raises(ShapeError):
        assoc_check(Shape.of([[3]]), top_stratum(Shape.of([[2]])))
    with pytest.raises(ShapeError):
        assoc_check(Shape.of([[4]]), parse_coppice("x ; S[S[S[p,p],p],p]"), max_codim=1)
