"""Desk-scale flow categories: 0- and 1-dimensional moduli with boundary pairings

A FlowCat2 stores, for finitely many collections of 1-morphisms, the points
of the 0-dimensional moduli spaces and the 1-dimensional components with
their boundary points. A boundary point of an edge is an Endpoint: a
descriptor together with one stored point for the outer and one for the
inner collection of that descriptor.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from typing_extensions import Literal

from ..config import DEFAULT_CAP, DEFAULT_EPSILON, DEFAULT_SHAPE_MAX
from ..utils.rational_utils import format_rational
from .errors import FiberMismatchError, ShapeError
from .novikov import Energy, EnergyCap
from .polytopes import (coppice_dim, gamma_graft, is_shape_stable, parse_coppice, smoothings,
                        stabilize, top_stratum)
from .shapes import (Collection, Descriptor, EvalGrid, OneCat, Shape, ShapeBound, Type1, Type3,
                     desc_collections, enum_desc, fiber_condition, format_collection,
                     format_evals, format_shape, glue_candidates, glue_evals, glue_index, is_closed)

logger = logging.getLogger(__name__)

PRODUCT_PREFIX = "prod["

# (a) gluing, (b) boundary pairing, (c) zero-shape energy, (d) strata
Clause = Literal["a", "b", "c", "d", "bounds", "types"]


@dataclass(frozen=True)
class ModuliPoint:
    """A point of the 0-dimensional moduli space of a collection"""
    id: str
    collection: Collection
    evals: EvalGrid
    energy: Energy
    stratum: Optional[str] = None


@dataclass(frozen=True)
class Endpoint:
    """Boundary point of an edge: a descriptor with an outer and an inner point"""
    desc: Descriptor
    left: str
    right: str


@dataclass(frozen=True)
class ModuliEdge:
    """A 1-dimensional component; intervals have two ends, circles none"""
    id: str
    collection: Collection
    evals: EvalGrid
    energy: Energy
    ends: Tuple[Endpoint, ...] = ()
    stratum: Optional[str] = None


@dataclass(frozen=True)
class FiberPair:
    """A point of a fiber product together with its glued class"""
    endpoint: Endpoint
    evals: EvalGrid
    energy: Energy


@dataclass
class ReportEntry:
    """One violation found by validate"""
    clause: Clause
    locus: str
    message: str
    key: Optional[Tuple[str, str, str]] = None

    def __str__(self) -> str:
        return f"[{self.clause}] {self.locus}: {self.message}"


@dataclass
class Report:
    """Validation result; empty means valid"""
    entries: List[ReportEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.entries

    def add(self, clause: Clause, locus: str, message: str, key=None) -> None:
        self.entries.append(ReportEntry(clause, locus, message, key))

    def clause(self, name: str) -> List[ReportEntry]:
        return [entry for entry in self.entries if entry.clause == name]

    def keys(self) -> set:
        return {entry.key for entry in self.entries if entry.key is not None}

    def sort(self) -> None:
        self.entries.sort(key=lambda e: (e.clause, e.locus, e.message))

    def __len__(self) -> int:
        return len(self.entries)

    def format(self) -> str:
        lines = [str(entry) for entry in self.entries]
        lines.append(f"{len(self.entries)} violations")
        return "\n".join(lines)


def class_key(collection: Collection, evals: EvalGrid, energy: Energy) -> Tuple[str, str, str]:
    """Text key of an equation class (collection, inputs and outputs, energy)"""
    return format_collection(collection), format_evals(evals), format_rational(energy)


def product_id(ids: Sequence[str]) -> str:
    """Id of the product point of the given single-block points"""
    flat: List[str] = []
    for point_id in ids:
        flat.extend(product_factors(point_id))
    if len(flat) == 1:
        return flat[0]
    return PRODUCT_PREFIX + "|".join(flat) + "]"


def product_factors(point_id: str) -> List[str]:
    if point_id.startswith(PRODUCT_PREFIX) and point_id.endswith("]"):
        return point_id[len(PRODUCT_PREFIX):-1].split("|")
    return [point_id]


@dataclass
class FlowCat2:
    """Generators, moduli tables and the bounds they are complete within"""
    cat: OneCat
    generators: Dict[str, Tuple[str, str]]
    points: Dict[str, ModuliPoint] = field(default_factory=dict)
    edges: Dict[str, ModuliEdge] = field(default_factory=dict)
    bound: ShapeBound = field(default_factory=lambda: ShapeBound(*DEFAULT_SHAPE_MAX))
    cap: Fraction = DEFAULT_CAP
    epsilon: Fraction = DEFAULT_EPSILON

    @property
    def margin_cap(self) -> Fraction:
        """Largest class energy that validation and the equation checks cover"""
        return self.cap - self.epsilon

    def points_at(self, collection: Collection) -> List[ModuliPoint]:
        return self._by_collection.get(collection, [])

    @cached_property
    def _by_collection(self) -> Dict[Collection, List[ModuliPoint]]:
        grouped: Dict[Collection, List[ModuliPoint]] = defaultdict(list)
        for point_id in sorted(self.points):
            point = self.points[point_id]
            grouped[point.collection].append(point)
        return dict(grouped)

    def collections(self) -> List[Collection]:
        return sorted(self._by_collection, key=format_collection)

    def edges_at(self, collection: Collection) -> List[ModuliEdge]:
        return [self.edges[e] for e in sorted(self.edges) if self.edges[e].collection == collection]

    def is_closed(self, shape: Shape) -> bool:
        """The shape and every shape its descriptors reach lie inside the bound"""
        return is_closed(self.bound, shape, self.cap, self.epsilon)

    def candidate_collections(self) -> List[Collection]:
        """Closed collections that carry an edge or some pair of stored points"""
        found = {edge.collection for edge in self.edges.values() if self.is_closed(edge.collection.shape)}
        found.update(glue_candidates(self.collections(), self.bound, self.cap, self.epsilon))
        return sorted(found, key=format_collection)

    def copy_with(self, **changes) -> 'FlowCat2':
        return replace(self, **changes)


def classified_pairs(cat: FlowCat2, L: Collection, cap: EnergyCap = None) -> List[FiberPair]:
    """Fiber pairs of L with their glued evaluations and energies"""
    cap = cat.cap if cap is None else cap
    shape = L.shape
    found = []
    for d in enum_desc(shape, cat.cap, cat.epsilon):
        outer, inner = desc_collections(L, d)
        lefts, rights = cat.points_at(outer), cat.points_at(inner)
        if not lefts or not rights:
            continue
        index = glue_index(shape, d)
        for p in lefts:
            for q in rights:
                energy = p.energy + q.energy
                if energy > cap or fiber_condition(d, p.evals, q.evals, index) is not None:
                    continue
                glued = glue_evals(d, p.evals, q.evals, shape)
                found.append(FiberPair(Endpoint(d, p.id, q.id), glued, energy))
    return found


def fiber_pairs(cat: FlowCat2, L: Collection, cap: EnergyCap = None) -> List[Endpoint]:
    """Every (descriptor, outer point, inner point) satisfying the fiber condition

    Args:
        cat (FlowCat2): The flow category
        L (Collection): Collection whose boundary is described
        cap: Bound on the total energy, the category's cap by default

    Returns:
        list: Endpoints in descriptor order, then by point id
    """
    return [pair.endpoint for pair in classified_pairs(cat, L, cap)]


def validate(cat: FlowCat2) -> Report:
    """Check the moduli tables against the boundary conditions

    Clauses: (a) endpoints glue to their edge with additive energy;
    (b) endpoints of closed collections biject onto the fiber pairs with
    energy at most cap - epsilon; (c) points of all-zero shapes have positive
    energy; (d) labelled endpoints glue to a face of their edge's stratum.
    Evaluation typing and bounds are reported as "types" and "bounds".
    """
    report = Report()
    _check_points(cat, report)
    _check_edges(cat, report)
    _check_pairing(cat, report)
    report.sort()
    if report.entries:
        logger.warning("validation found %d violations", len(report.entries))
    else:
        logger.debug("validation passed for %d points and %d edges", len(cat.points), len(cat.edges))
    return report


def _check_points(cat: FlowCat2, report: Report) -> None:
    for point_id in sorted(cat.points):
        point = cat.points[point_id]
        shape = point.collection.shape
        if not cat.bound.contains(shape):
            report.add('bounds', point_id, f"shape {format_shape(shape)} outside the bound")
        if point.energy > cat.cap or point.energy < 0:
            report.add('bounds', point_id, f"energy {format_rational(point.energy)} outside [0, cap]")
        if shape.is_zero and point.energy <= 0:
            report.add('c', point_id, "zero-shape point without positive energy")
        for problem in eval_problems(cat, point.collection, point.evals):
            report.add('types', point_id, problem)


def eval_problems(cat: FlowCat2, collection: Collection, evals: EvalGrid) -> List[str]:
    """Generators whose 1-morphism endpoints disagree with the collection"""
    if evals.shape != collection.shape:
        return [f"evaluations of shape {format_shape(evals.shape)} on {format_shape(collection.shape)}"]
    problems = []
    for j, block in enumerate(evals.alpha):
        for i, col in enumerate(block):
            for k, gen in enumerate(col):
                expected = collection.alpha_pair(i + 1, j + 1, k + 1)
                if cat.generators.get(gen) != expected:
                    problems.append(f"input {(i + 1, j + 1, k + 1)} generator {gen} is not in 2Mor{expected}")
    for j, gen in enumerate(evals.beta):
        expected = collection.ends[j]
        if cat.generators.get(gen) != expected:
            problems.append(f"output {j + 1} generator {gen} is not in 2Mor{expected}")
    return problems


def _check_edges(cat: FlowCat2, report: Report) -> None:
    for edge_id in sorted(cat.edges):
        edge = cat.edges[edge_id]
        if not cat.bound.contains(edge.collection.shape):
            report.add('bounds', edge_id, "edge outside the bound")
        if edge.energy > cat.cap:
            report.add('bounds', edge_id, f"energy {format_rational(edge.energy)} above the cap")
        for problem in eval_problems(cat, edge.collection, edge.evals):
            report.add('types', edge_id, problem)
        for n, end in enumerate(edge.ends):
            locus = f"{edge_id}/end{n}"
            left, right = cat.points.get(end.left), cat.points.get(end.right)
            if left is None or right is None:
                missing = end.left if left is None else end.right
                report.add('a', locus, f"references missing point {missing}")
                continue
            _check_endpoint(cat, edge, end, left, right, locus, report)


def _check_endpoint(cat: FlowCat2, edge: ModuliEdge, end: Endpoint, left: ModuliPoint,
                    right: ModuliPoint, locus: str, report: Report) -> None:
    try:
        outer, inner = desc_collections(edge.collection, end.desc)
    except ShapeError as e:
        report.add('a', locus, f"descriptor {end.desc} does not apply: {e}")
        return
    if left.collection != outer or right.collection != inner:
        report.add('a', locus, f"points do not lie over the collections of {end.desc}")
        return
    try:
        glued = glue_evals(end.desc, left.evals, right.evals, edge.collection.shape)
    except (FiberMismatchError, ShapeError) as e:
        report.add('a', locus, str(e))
        return
    if glued != edge.evals:
        report.add('a', locus, f"glued evaluations {format_evals(glued)} differ from the edge's")
    if left.energy + right.energy != edge.energy:
        report.add('a', locus, "energy is not additive")
    if left.stratum and right.stratum:
        problem = _stratum_problem(edge, end.desc, left.stratum, right.stratum)
        if problem:
            report.add('d', locus, problem)


def _stratum_problem(edge: ModuliEdge, d: Descriptor, left: str, right: str) -> Optional[str]:
    shape = edge.collection.shape
    if not is_shape_stable(shape):
        return None
    try:
        glued = stabilize(gamma_graft(d, parse_coppice(left), parse_coppice(right)))
    except (ShapeError, ValueError) as e:
        return f"strata do not graft along {d}: {e}"
    if glued.shape != shape:
        return f"grafted stratum has shape {glued.shape}"
    if edge.stratum is None:
        return None
    target = parse_coppice(edge.stratum)
    if target == top_stratum(shape) or glued == target:
        return None
    frontier, seen = [glued], {glued}
    while frontier:
        current = frontier.pop()
        for up in smoothings(current):
            if up == target:
                return None
            if up not in seen and coppice_dim(up) < coppice_dim(target):
                seen.add(up)
                frontier.append(up)
    return f"grafted stratum {glued} is not a face of {edge.stratum}"


def _check_pairing(cat: FlowCat2, report: Report) -> None:
    for edge_id in sorted(cat.edges):
        edge = cat.edges[edge_id]
        if len(edge.ends) not in (0, 2):
            report.add('b', edge_id, f"edge has {len(edge.ends)} ends",
                       class_key(edge.collection, edge.evals, edge.energy))
    for L in cat.candidate_collections():
        locus = format_collection(L)
        pairs = {pair.endpoint: pair for pair in classified_pairs(cat, L, cat.margin_cap)}
        used = Counter(end for edge in cat.edges_at(L) for end in edge.ends)
        for end, pair in pairs.items():
            key = class_key(L, pair.evals, pair.energy)
            if used[end] == 0:
                report.add('b', locus, f"fiber pair {end.desc} ({end.left}, {end.right}) bounds no edge", key)
            elif used[end] > 1:
                report.add('b', locus, f"fiber pair {end.desc} ({end.left}, {end.right}) bounds {used[end]} edges", key)


def restrict_to_mor(cat: FlowCat2, M0: Any, M1: Any) -> FlowCat2:
    """Single-seam, single-block part between two objects"""
    if M0 not in cat.cat.objects or M1 not in cat.cat.objects:
        raise ShapeError(f"unknown objects {M0}, {M1}")

    def keep(collection: Collection) -> bool:
        shape = collection.shape
        return shape.r == 1 and shape.a == 1 and collection.objects == (M0, M1)

    generators = {g: ends for g, ends in cat.generators.items()
                  if cat.cat.source(ends[0]) == M0 and cat.cat.target(ends[0]) == M1}
    points = {pid: p for pid, p in cat.points.items() if keep(p.collection)}
    edges = {eid: e for eid, e in cat.edges.items() if keep(e.collection)}
    bound = ShapeBound(1, 1, cat.bound.n)
    return FlowCat2(cat.cat, generators, points, edges, bound, cat.cap, cat.epsilon)


def _stack(points: Sequence[ModuliPoint]) -> Tuple[Collection, EvalGrid, Energy]:
    first = points[0].collection
    collection = Collection(first.cat, first.objects, tuple(p.collection.grid[0] for p in points))
    evals = EvalGrid(tuple(p.evals.alpha[0] for p in points), tuple(p.evals.beta[0] for p in points))
    return collection, evals, sum((p.energy for p in points), Fraction(0))


def _lift_end(end: Endpoint, position: int, before: List[str], after: List[str]) -> Endpoint:
    d = end.desc
    if isinstance(d, Type1):
        return Endpoint(Type1(d.i, position + 1, d.s, d.t), product_id(before + [end.left] + after), end.right)
    if isinstance(d, Type3):
        return Endpoint(Type3(position + 1, d.parts), end.left, product_id(before + [end.right] + after))
    raise ShapeError(f"{d} cannot be lifted at width at most 2")


def product_extend(cat: FlowCat2, r_c: int) -> FlowCat2:
    """Add the multi-block moduli of width r_c as products of single-block ones

    Points of a >= 2 blocks are products of single-block points over the same
    objects; edges are products with exactly one edge factor, whose ends
    lift blockwise. Products above the cap or outside the bound are skipped.
    Product edges whose lifted ends do not resolve are skipped with a warning.

    Raises:
        ShapeError: If r_c is not 1 or 2
    """
    if r_c not in (1, 2):
        raise ShapeError(f"products are only compatible for width 1 or 2, got {r_c}")
    base: Dict[Tuple, List[ModuliPoint]] = defaultdict(list)
    for point_id in sorted(cat.points):
        point = cat.points[point_id]
        shape = point.collection.shape
        if shape.r == r_c and shape.a == 1:
            base[point.collection.objects].append(point)
    points = dict(cat.points)
    for objects, group in sorted(base.items(), key=lambda item: str(item[0])):
        for a in range(2, cat.bound.a + 1):
            for combo in _combos(group, a):
                collection, evals, energy = _stack(combo)
                if energy > cat.cap or not cat.bound.contains(collection.shape):
                    continue
                pid = product_id([p.id for p in combo])
                points.setdefault(pid, ModuliPoint(pid, collection, evals, energy))
    edges = dict(cat.edges)
    unresolved = set()
    for edge_id in sorted(cat.edges):
        edge = cat.edges[edge_id]
        shape = edge.collection.shape
        if shape.r != r_c or shape.a != 1:
            continue
        group = base.get(edge.collection.objects, [])
        for a in range(2, cat.bound.a + 1):
            for position in range(a):
                for others in _combos(group, a - 1):
                    before, after = list(others[:position]), list(others[position:])
                    energy = edge.energy + sum((p.energy for p in others), Fraction(0))
                    if energy > cat.cap:
                        continue
                    stand_in = ModuliPoint(edge.id, edge.collection, edge.evals, edge.energy)
                    collection, evals, _ = _stack(before + [stand_in] + after)
                    if not cat.bound.contains(collection.shape):
                        continue
                    before_ids, after_ids = [p.id for p in before], [p.id for p in after]
                    ends = tuple(_lift_end(end, position, before_ids, after_ids) for end in edge.ends)
                    missing = [pid for end in ends for pid in (end.left, end.right) if pid not in points]
                    if missing:
                        if edge.id not in unresolved:
                            logger.warning("edge %s has ends through missing point %s; skipping its products",
                                           edge.id, missing[0])
                        unresolved.add(edge.id)
                        continue
                    eid = PRODUCT_PREFIX + "|".join(before_ids + [edge.id] + after_ids) + "]"
                    edges.setdefault(eid, ModuliEdge(eid, collection, evals, energy, ends))
    logger.debug("product extension at width %d: %d points, %d edges",
                 r_c, len(points) - len(cat.points), len(edges) - len(cat.edges))
    return cat.copy_with(points=points, edges=edges)


def _combos(items: Sequence[ModuliPoint], count: int) -> Iterable[Tuple[ModuliPoint, ...]]:
    if count == 0:
        yield ()
        return
    for item in items:
        for rest in _combos(items, count - 1):
            yield (item,) + rest
