import pytest

from twoassoc.core.errors import ShapeError
from twoassoc.core.polytopes import (MARK, as_coppice, boundary_descriptors, boundary_strata, codim, coppice_dim,
                                     enum_fiber, enum_w, face_poset, forgetful, format_coppice, gamma_graft, ghost,
                                     ghost_lift, is_exceptional, is_shape_stable, is_stable, multi, parse_coppice,
                                     single, smoothings, stabilize, top_stratum, w_as_k_iso, w_dim)
from twoassoc.core.shapes import Shape, ShapeBound, Type1, Type3, format_shape
from twoassoc.core.trees import LEAF, corolla, enum_k, euler_char, f_vector, format_tree, k_dim


def _texts(strata):
    return sorted(format_coppice(c) for c in strata)


def _stable_shapes(total, blocks):
    """Stable shapes with at most the given blocks and r + |n| <= total"""
    bound = ShapeBound(total, blocks, total)
    return [s for s in bound.shapes() if s.r + sum(s.masses) <= total and is_shape_stable(s)]


@pytest.mark.parametrize("n", range(2, 6))
def test_single_seam_w_is_k(n):
    strata = enum_w((n,))
    assert len(strata) == len(enum_k(n))
    pairs = w_as_k_iso(n)
    assert sorted(format_tree(t) for _, t in pairs) == sorted(format_tree(t) for t in enum_k(n))
    for tp, tree in pairs:
        assert coppice_dim(tp) == k_dim(tree)


@pytest.mark.parametrize("n", [0, 1])
def test_exceptional_single_seam(n):
    strata = enum_w((n,))
    assert len(strata) == 1
    assert w_as_k_iso(n) == [(strata[0], LEAF)]


def test_w11_is_an_interval():
    strata = enum_w((1, 1))
    assert _texts(strata) == sorted([
        "(x,x) ; B<p|p>",
        "(x,x) ; S[B<p|>,B<|p>]",
        "(x,x) ; S[B<|p>,B<p|>]",
    ])
    assert f_vector([coppice_dim(tp) for tp in strata]) == (2, 1)


def test_w00_is_a_point():
    strata = enum_w((0, 0))
    assert len(strata) == 1
    assert format_coppice(strata[0]) == "(x,x) ; B<|>"


def test_zero_row_of_width_three_matches_k3():
    strata = enum_w((0, 0, 0))
    assert len(strata) == 3
    assert sorted(format_tree(tp.seam) for tp in strata) == sorted(format_tree(t) for t in enum_k(3))


def test_w2_counts():
    assert len(enum_w((2,))) == 1
    assert len(enum_w((3,))) == 3
    assert len(enum_w((1, 0))) == 1


def test_enum_w_rejects_negative():
    with pytest.raises(ShapeError):
        enum_w((1, -1))
    with pytest.raises(ShapeError):
        enum_w(())


def test_top_stratum_comes_first():
    for n in [(3,), (1, 1), (2, 1), (1, 0, 1)]:
        strata = enum_w(n)
        shape = Shape.of([n])
        assert as_coppice(strata[0]) == top_stratum(shape)
        assert codim(as_coppice(strata[0])) == 0


def test_text_form_round_trip():
    text = "((x,x),x) ; B<B<p|>,B<|p>|p>"
    c = parse_coppice(text)
    assert format_coppice(c) == text
    assert c.shape == Shape.of([[1, 1, 1]])
    with pytest.raises(ShapeError):
        parse_coppice("x ; B<p|p>")
    with pytest.raises(ValueError):
        parse_coppice("(x,x)")


def test_fiber_product_blocks_share_the_seam_tree():
    strata = enum_fiber(Shape.of([[1, 0], [0, 1]]))
    assert len(strata) == 1
    assert format_coppice(strata[0]) == "(x,x) ; B<p|> ; B<|p>"


def test_stability():
    assert is_exceptional(1, (1,))
    assert is_exceptional(2, (0, 0))
    assert not is_exceptional(3, (0, 0, 0))
    assert not is_shape_stable(Shape.of([[0, 0], [1, 1]]))
    assert is_stable(top_stratum(Shape.of([[1, 1]])))
    assert not is_stable(parse_coppice("x ; S[S[p],p]"))


def test_stabilize_forgets_unstable_bubbles():
    unstable = parse_coppice("x ; S[S[S[p,p]],p]")
    assert format_coppice(stabilize(unstable)) == "x ; S[S[p,p],p]"
    pointless = parse_coppice("((x,x),x) ; B<B<|>|>")
    assert format_coppice(stabilize(pointless)) == "((x,x),x) ; B<|>"


def test_ghost_lift_fills_empty_internal_seams():
    c = parse_coppice("((x,x),x) ; B<|p>")
    lifted = ghost_lift(c)
    assert format_coppice(lifted) == "((x,x),x) ; B<B<|>|p>"
    assert stabilize(lifted) == c


@pytest.mark.parametrize("shape", _stable_shapes(5, 2), ids=format_shape)
def test_boundary_is_the_codimension_one_strata(shape):
    images = [format_coppice(image) for _, image in boundary_strata(shape)]
    expected = sorted(format_coppice(c) for c in enum_fiber(shape) if codim(c) == 1)
    assert len(images) == len(set(images))
    assert sorted(images) == expected


def test_boundary_descriptors_of_w11():
    found = {str(d) for d in boundary_descriptors(Shape.of([[1, 1]]))}
    assert found == {str(Type3(1, ((1, 0), (0, 1)))), str(Type3(1, ((0, 1), (1, 0))))}


def test_unstable_shape_has_no_boundary():
    assert boundary_strata(Shape.of([[1]])) == []


def test_face_poset_of_w11():
    covers = face_poset(Shape.of([[1, 1]]))
    assert covers == {
        "(x,x) ; B<p|p>": [],
        "(x,x) ; S[B<p|>,B<|p>]": ["(x,x) ; B<p|p>"],
        "(x,x) ; S[B<|p>,B<p|>]": ["(x,x) ; B<p|p>"],
    }


def test_smoothings_raise_dimension_by_one():
    shape = Shape.of([[4]])
    for c in enum_fiber(shape):
        for up in smoothings(c):
            assert coppice_dim(up) == coppice_dim(c) + 1


def test_constructors():
    assert format_coppice(as_coppice(enum_w((2,))[0])) == "x ; S[p,p]"
    assert ghost(corolla(3)) == multi([(), (), ()])
    assert single([MARK, MARK]).mass == 2


def test_gamma_graft_nests_a_bubble():
    top = top_stratum(Shape.of([[2]]))
    glued = gamma_graft(Type1(1, 1, 0, 2), top, top)
    assert format_coppice(glued) == "x ; S[S[p,p],p]"
    assert codim(glued) == 1


def test_forgetful_and_dimension():
    c = top_stratum(Shape.of([[1, 1]]))
    assert forgetful(c) == corolla(2)
    assert w_dim(c) == 1


@pytest.mark.parametrize("shape", _stable_shapes(6, 1), ids=format_shape)
def test_euler_characteristic_of_stable_shapes(shape):
    assert euler_char([coppice_dim(tp) for tp in enum_w(shape.n[0])]) == 1


def test_boundary_strata_are_memoized():
    shape = Shape.of([[1, 1]])
    first = boundary_strata(shape)
    first.clear()
    assert len(boundary_strata(shape)) == 2
    _, image = boundary_strata(shape)[0]
    smoothings(image).clear()
    assert top_stratum(shape) in smoothings(image)
