import logging
from dataclasses import replace
from fractions import Fraction

import pytest

from twoassoc.core.errors import ShapeError
from twoassoc.core.flowcat import (Endpoint, FlowCat2, ModuliEdge, ModuliPoint, class_key, fiber_pairs,
                                   product_extend, product_factors, product_id, restrict_to_mor, validate)
from twoassoc.core.gen import fill_strata
from twoassoc.core.shapes import EvalGrid, Type1, make_collection, single_object_cat

# x -> z, the class of d applied twice in the chain fixture
GLUED = EvalGrid(((("x",),),), ("z",))


def test_missing_edge_is_reported_with_its_class(chain_cat):
    report = validate(chain_cat)
    assert not report.ok
    entries = report.clause('b')
    assert len(entries) == 1
    dx = chain_cat.points["dx"]
    assert entries[0].key == class_key(dx.collection, GLUED, Fraction(2))
    assert report.format().endswith("1 violations")


def test_pairing_an_odd_class_leaves_a_violation(chain_cat):
    end = fiber_pairs(chain_cat, chain_cat.points["dx"].collection)[0]
    assert end == Endpoint(Type1(1, 1, 0, 1), "dy", "dx")
    dx = chain_cat.points["dx"]
    edge = ModuliEdge("e0", dx.collection, GLUED, Fraction(2), (end,))
    report = validate(chain_cat.copy_with(edges={"e0": edge}))
    assert [entry.message for entry in report.clause('b')] == ["edge has 1 ends"]


def test_endpoint_checks(chain_cat):
    dx = chain_cat.points["dx"]
    missing = ModuliEdge("e0", dx.collection, GLUED, Fraction(2),
                         (Endpoint(Type1(1, 1, 0, 1), "dy", "ghost"), Endpoint(Type1(1, 1, 0, 1), "dy", "dx")))
    report = validate(chain_cat.copy_with(edges={"e0": missing}))
    assert any("missing point ghost" in entry.message for entry in report.clause('a'))
    heavy = replace(missing, energy=Fraction(3), ends=(Endpoint(Type1(1, 1, 0, 1), "dy", "dx"),) * 2)
    report = validate(chain_cat.copy_with(edges={"e0": heavy}))
    assert any(entry.message == "energy is not additive" for entry in report.clause('a'))


def test_zero_shape_points_need_energy():
    cat = single_object_cat()
    disk = ModuliPoint("disk", make_collection(cat, ("M", "M"), [[("e",)]]), EvalGrid((((),),), ("1",)),
                       Fraction(0))
    flow = FlowCat2(cat, {"1": ("e", "e")}, {"disk": disk})
    report = validate(flow)
    assert [entry.locus for entry in report.clause('c')] == ["disk"]


def test_typing_and_bounds(unary_point):
    cat = single_object_cat()
    point = unary_point("p", "x", "nowhere", 4)
    report = validate(FlowCat2(cat, {"x": ("e", "e")}, {"p": point}))
    assert any("nowhere" in entry.message for entry in report.clause('types'))
    assert any("outside [0, cap]" in entry.message for entry in report.clause('bounds'))


def test_generated_categories_validate(diamond_cat, z2_algebra_cat, strict_z2_cat):
    for flow in (diamond_cat, z2_algebra_cat, strict_z2_cat):
        assert validate(flow).ok
        assert flow.edges


def test_top_strata_labels_pass(diamond_cat):
    labelled = fill_strata(diamond_cat)
    assert all(p.stratum for p in labelled.points.values())
    assert validate(labelled).ok


def test_restrict_to_mor(strict_z2_cat):
    restricted = restrict_to_mor(strict_z2_cat, "M", "M")
    assert restricted.points
    assert all(p.collection.shape.r == 1 and p.collection.shape.a == 1 for p in restricted.points.values())
    assert restricted.bound.r == 1 and restricted.bound.a == 1
    assert set(restricted.generators) == {"1", "g"}
    with pytest.raises(ShapeError):
        restrict_to_mor(strict_z2_cat, "M", "N")


def test_product_extend(unary_point):
    points = {p.id: p for p in [unary_point("a", "x", "y", 1), unary_point("b", "y", "z", 1)]}
    flow = FlowCat2(single_object_cat(), {g: ("e", "e") for g in "xyz"}, points)
    extended = product_extend(flow, 1)
    products = [p for p in extended.points.values() if p.collection.shape.a == 2]
    assert len(products) == 4
    stacked = extended.points[product_id(["a", "b"])]
    assert stacked.energy == Fraction(2)
    assert stacked.evals.beta == ("y", "z")
    assert product_factors(stacked.id) == ["a", "b"]
    with pytest.raises(ShapeError):
        product_extend(flow, 3)


def test_product_ids_flatten():
    assert product_id(["a"]) == "a"
    assert product_id([product_id(["a", "b"]), "c"]) == "prod[a|b|c]"


def test_product_extend_warns_on_unresolved_ends(diamond_cat, caplog):
    points = {pid: p for pid, p in diamond_cat.points.items() if pid != "mu1[x>y]"}
    flow = diamond_cat.copy_with(points=points)
    with caplog.at_level(logging.WARNING, logger="twoassoc.core.flowcat"):
        extended = product_extend(flow, 1)
    assert "missing point mu1[x>y]" in caplog.text
    assert set(extended.edges) == set(diamond_cat.edges)
