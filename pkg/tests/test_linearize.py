from fractions import Fraction

import pytest

from twoassoc.core.errors import ConvergenceError, ShapeError
from twoassoc.core.flowcat import class_key, validate
from twoassoc.core.linearize import (MuFamily, bifunctor_identity_check, check_a2, check_a_infty, extract_all,
                                     extract_mu, fiber_compat_problems, is_fiber_compatible, residual_report,
                                     restrict_linear)
from twoassoc.core.novikov import ONE, ZERO, monomial
from twoassoc.core.shapes import EvalGrid, Shape, make_collection, single_object_cat

GLUED = EvalGrid(((("x",),),), ("z",))


def test_extract_mu_counts_points(chain_cat, unary_point):
    L = chain_cat.points["dx"].collection
    tensor = extract_mu(chain_cat, L)
    assert tensor.get(EvalGrid(((("x",),),), ("y",))) == monomial(1)
    assert tensor.get(GLUED) == ZERO
    assert tensor.valuation() == Fraction(1)
    doubled = chain_cat.copy_with(points={**chain_cat.points, "dx2": unary_point("dx2", "x", "y", 1)})
    assert extract_mu(doubled, L).get(EvalGrid(((("x",),),), ("y",))) == ZERO


def test_broken_square_leaves_a_residual_with_the_validate_key(chain_cat):
    residuals = check_a_infty(extract_all(chain_cat))
    assert len(residuals) == 1
    residual = residuals[0]
    assert residual.value == monomial(2)
    assert residual.evals == GLUED
    dx = chain_cat.points["dx"]
    assert residual.keys() == [class_key(dx.collection, GLUED, Fraction(2))]
    assert set(residual.keys()) <= validate(chain_cat).keys()
    assert check_a2(extract_all(chain_cat))


def test_lower_cap_truncates_the_residual(chain_cat):
    assert check_a_infty(extract_all(chain_cat), cap=Fraction(2)) == []


def test_residual_report(chain_cat):
    report = residual_report(check_a_infty(extract_all(chain_cat)))
    lines = report.splitlines()
    assert lines[-1] == "1 residuals"
    assert "T^{2}" in lines[0]
    assert residual_report([]) == "0 residuals"


@pytest.mark.parametrize("name", ["diamond_cat", "z2_algebra_cat", "strict_z2_cat", "strict_matrix_cat"])
def test_generated_families_satisfy_the_equations(name, request):
    family = extract_all(request.getfixturevalue(name))
    assert check_a_infty(family) == []
    assert check_a2(family) == []
    assert fiber_compat_problems(family, 1) == []
    assert is_fiber_compatible(family)


def test_missing_product_is_not_fiber_compatible(diamond_cat):
    family = extract_all(diamond_cat)
    stacked = next(L for L in family.collections() if L.shape.r == 1 and L.shape.a == 2 and family.tensors[L])
    del family.tensors[stacked]
    problems = fiber_compat_problems(family, 1)
    assert problems
    assert not is_fiber_compatible(family)


def test_fiber_compat_width():
    with pytest.raises(ShapeError):
        fiber_compat_problems(MuFamily(single_object_cat()), 3)


def test_restrict_linear(strict_z2_cat):
    family = restrict_linear(extract_all(strict_z2_cat), "M", "M")
    assert family.tensors
    assert all(L.shape.r == 1 and L.shape.a == 1 for L in family.tensors)
    assert family.bound.r == 1 and family.bound.a == 1


def test_strict_category_is_a_bifunctor(strict_z2_cat):
    assert bifunctor_identity_check(extract_all(strict_z2_cat)) == []


def test_matrix_category_is_a_bifunctor(strict_matrix_cat):
    assert bifunctor_identity_check(extract_all(strict_matrix_cat)) == []


def test_wrong_vertical_composition_breaks_interchange(strict_z2_cat):
    family = extract_all(strict_z2_cat)
    vertical = make_collection(family.cat, ("M", "M"), [[("e", "e", "e")]])
    family.set_entry(vertical, EvalGrid(((("1", "g"),),), ("g",)), ZERO)
    shapes = {residual.collection.shape for residual in check_a2(family)}
    assert Shape.of([[1, 1]]) in shapes


def _whisker_family():
    cat = single_object_cat()
    family = MuFamily(cat)
    whisker = make_collection(cat, ("M", "M", "M"), [[("e", "e"), ("e",)]])
    family.set_entry(whisker, EvalGrid(((("a",), ()),), ("a",)), ONE)
    d = make_collection(cat, ("M", "M"), [[("e", "e")]])
    family.set_entry(d, EvalGrid(((("a",),),), ("b",)), monomial(1))
    return family, whisker


def test_bifunctor_residual():
    family, whisker = _whisker_family()
    residuals = bifunctor_identity_check(family)
    assert len(residuals) == 1
    assert residuals[0].value == monomial(1)
    assert residuals[0].terms == ("bifunctor",)
    assert residuals[0].collection == whisker


def test_whiskering_a_chain_map_leaves_no_residual():
    family, whisker = _whisker_family()
    family.set_entry(whisker, EvalGrid(((("b",), ()),), ("b",)), ONE)
    assert bifunctor_identity_check(family) == []


def test_right_whiskering_a_chain_map_leaves_no_residual():
    cat = single_object_cat()
    family = MuFamily(cat)
    whisker = make_collection(cat, ("M", "M", "M"), [[("e",), ("e", "e")]])
    for x in ("a", "b"):
        family.set_entry(whisker, EvalGrid((((), (x,)),), (x,)), ONE)
    d = make_collection(cat, ("M", "M"), [[("e", "e")]])
    family.set_entry(d, EvalGrid(((("a",),),), ("b",)), monomial(1))
    assert bifunctor_identity_check(family) == []


def test_disk_curvature_must_vanish():
    family, _ = _whisker_family()
    disk = make_collection(family.cat, ("M", "M"), [[("e",)]])
    family.set_entry(disk, EvalGrid((((),),), ("a",)), monomial(1))
    with pytest.raises(ConvergenceError):
        bifunctor_identity_check(family)


def test_set_entry_drops_zero():
    family, whisker = _whisker_family()
    family.set_entry(whisker, EvalGrid(((("a",), ()),), ("a",)), ZERO)
    assert not family.tensor(whisker)


def test_curvature_of_valuation_zero_diverges():
    cat = single_object_cat()
    family = MuFamily(cat)
    disk = make_collection(cat, ("M", "M"), [[("e",)]])
    family.set_entry(disk, EvalGrid((((),),), ("a",)), ONE)
    with pytest.raises(ConvergenceError):
        check_a_infty(family)
    with pytest.raises(ConvergenceError):
        check_a2(family)
