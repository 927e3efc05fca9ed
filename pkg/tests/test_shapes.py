from fractions import Fraction

import pytest

from twoassoc.core.errors import CompositionError, ConvergenceError, FiberMismatchError, ShapeError
from twoassoc.core.shapes import (EvalGrid, OneCat, Shape, ShapeBound, Type1, Type2, Type3, assoc_shape_commute,
                                  check_desc, desc_collections, desc_shapes, enum_collections, enum_desc,
                                  format_shape, glue_collections, glue_evals, glued_shape, is_closed,
                                  make_collection, parse_desc, parse_shape, single_object_cat,
                                  symbolic_collection, vector_compositions, zero_budget)

ONE, TWO = Fraction(1), Fraction(2)


def test_shape_text_form():
    shape = Shape.of([[1, 0], [0, 2]])
    assert format_shape(shape) == "(2,2,((1,0),(0,2)))"
    assert parse_shape("(2,2,((1,0),(0,2)))") == shape
    assert shape.masses == (1, 2)
    assert Shape.of([[0, 0]]).is_zero


@pytest.mark.parametrize("rows", [[[1, -1]], [[1, 0], [1]], []])
def test_invalid_shapes(rows):
    with pytest.raises(ShapeError):
        Shape.of(rows)


def test_bound():
    bound = ShapeBound(2, 2, 3)
    assert bound.contains(Shape.of([[1, 2], [0, 0]]))
    assert not bound.contains(Shape.of([[2, 2]]))
    assert not bound.contains(Shape.of([[0, 0, 0]]))
    assert all(bound.contains(s) for s in bound.shapes())


def test_zero_budget():
    assert zero_budget(Fraction(3), ONE) == 2
    assert zero_budget(TWO, ONE) == 1
    assert zero_budget(ONE, ONE) == 0
    with pytest.raises(ConvergenceError):
        zero_budget(None, ONE)
    with pytest.raises(ConvergenceError):
        zero_budget(TWO, Fraction(0))


def test_descriptors_of_a_whisker_shape():
    found = enum_desc(Shape.of([[1, 0]]), TWO, ONE)
    assert len(found) == 7
    type1 = [d for d in found if isinstance(d, Type1)]
    type3 = {str(d) for d in found if isinstance(d, Type3)}
    assert len(type1) == 4
    assert type3 == {"T3(1;[(1,0)])", "T3(1;[(1,0)|(0,0)])", "T3(1;[(0,0)|(1,0)])"}
    assert not any(isinstance(d, Type2) for d in found)


def test_descriptors_without_zero_parts():
    found = enum_desc(Shape.of([[1, 0]]), TWO, ONE, zero_parts=False)
    assert {str(d) for d in found if isinstance(d, Type3)} == {"T3(1;[(1,0)])"}


def test_zero_segment_takes_a_zero_part():
    found = enum_desc(Shape.of([[0, 0, 1]]), Fraction(1), ONE)
    type2 = {str(d) for d in found if isinstance(d, Type2)}
    assert "T2(0,2;[(0,0)])" in type2
    assert all("(0,0)|(0,0)" not in text for text in type2)


@pytest.mark.parametrize("text", ["T1(1,1,0,2)", "T2(0,2;[(1,0)|(0,1)];[(0,0)])", "T3(2;[(1,0)|(0,0)])"])
def test_descriptor_text_form(text):
    assert str(parse_desc(text)) == text


def test_parse_desc_rejects():
    with pytest.raises(ValueError):
        parse_desc("T4(1)")


def test_desc_shapes():
    shape = Shape.of([[1, 0]])
    outer, inner = desc_shapes(shape, Type1(1, 1, 0, 0))
    assert outer == Shape.of([[2, 0]])
    assert inner == Shape.of([[0]])
    outer, inner = desc_shapes(shape, Type3(1, ((1, 0), (0, 0))))
    assert outer == Shape.of([[2]])
    assert inner == Shape.of([[1, 0], [0, 0]])


def test_check_desc_rejects():
    shape = Shape.of([[1, 0]])
    with pytest.raises(ShapeError):
        check_desc(shape, Type1(1, 1, 1, 1))
    with pytest.raises(ShapeError):
        check_desc(shape, Type3(1, ((1, 1),)))
    with pytest.raises(ShapeError):
        check_desc(shape, Type2(0, 2, (((1, 0),),)))


@pytest.mark.parametrize("rows", [[[2]], [[1, 0]], [[1, 1], [0, 1]], [[1, 0, 1]], [[0, 1, 0], [1, 0, 0]]])
def test_glued_shape_inverts_desc_shapes(rows):
    shape = Shape.of(rows)
    for d in enum_desc(shape, Fraction(3), ONE):
        assert glued_shape(d, *desc_shapes(shape, d)) == shape


@pytest.mark.parametrize("rows", [[[2]], [[1, 1], [0, 1]], [[1, 0, 1]], [[0, 1, 0], [1, 0, 0]]])
def test_collections_glue_back(rows):
    collection = symbolic_collection(Shape.of(rows))
    for d in enum_desc(collection.shape, TWO, ONE):
        outer, inner = desc_collections(collection, d)
        assert glue_collections(d, outer, inner) == collection


def test_glue_rejects_mismatched_collections():
    collection = symbolic_collection(Shape.of([[2]]))
    d = Type1(1, 1, 0, 2)
    outer, _ = desc_collections(collection, d)
    _, shifted = desc_collections(collection, Type1(1, 1, 1, 1))
    with pytest.raises(CompositionError):
        glue_collections(d, outer, shifted)


def test_is_closed():
    bound = ShapeBound(1, 1, 3)
    assert is_closed(bound, Shape.of([[2]]), Fraction(3), ONE)
    assert not is_closed(bound, Shape.of([[3]]), Fraction(3), ONE)


def _unary(x, y):
    return EvalGrid((((x,),),), (y,))


def test_glue_evals():
    d = Type1(1, 1, 0, 1)
    assert glue_evals(d, _unary("y", "z"), _unary("x", "y")) == _unary("x", "z")
    with pytest.raises(FiberMismatchError) as info:
        glue_evals(d, _unary("y", "z"), _unary("x", "w"))
    assert info.value.left == "y"
    assert info.value.right == "w"


def test_one_category():
    cat = single_object_cat()
    assert cat.check_axioms() == []
    assert cat.compose("e", "e") == "e"
    arrows = OneCat(("A", "B"), {"1A": ("A", "A"), "1B": ("B", "B"), "f": ("A", "B")}, {},
                    {"A": "1A", "B": "1B"})
    assert arrows.check_axioms() == []
    assert make_collection(arrows, ("A", "B"), [[("f", "f")]]).shape == Shape.of([[1]])
    with pytest.raises(CompositionError):
        make_collection(arrows, ("B", "A"), [[("f",)]])
    with pytest.raises(CompositionError):
        arrows.compose("f", "f")


def test_enum_collections():
    cat = single_object_cat()
    found = enum_collections(cat, Shape.of([[1, 0], [0, 1]]))
    assert len(found) == 1
    assert found[0].grid == ((("e", "e"), ("e",)), (("e",), ("e", "e")))


def test_vector_compositions():
    assert set(vector_compositions((1, 1), min_parts=2)) == {((1, 0), (0, 1)), ((0, 1), (1, 0))}
    assert vector_compositions((0, 0), min_parts=0) == [()]
    assert ((0, 0), (1, 0)) in vector_compositions((1, 0), max_zero=1)


def test_decompositions_commute():
    shape = Shape.of([[4]])
    first = [(0, Type1(1, 1, 0, 2)), (0, Type1(1, 1, 1, 2))]
    second = [(0, Type1(1, 1, 2, 2)), (0, Type1(1, 1, 0, 2))]
    assert assoc_shape_commute(shape, first, second)
    assert not assoc_shape_commute(shape, first[:1], second[:1])
