"""Generator families of valid flow categories and seeded invalid mutants

Every family places its structure points at energies for which both sides
of each defining identity have the same total energy. Each equation class
then has an even number of fiber pairs exactly when the identities hold
mod 2, and the 1-dimensional moduli are built by pairing the fiber pairs of
each class lexicographically.
"""

import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import (ASSOC_SHAPE_MAX, DEFAULT_CAP, DEFAULT_EPSILON, DEFAULT_SHAPE_MAX,
                      MAX_RANDOM_BASIS, STRICT_SHAPE_MAX, STRUCTURE_ENERGY)
from ..utils.rational_utils import format_rational, parse_rational
from .errors import CompositionError, GeneratorError, MutationError
from .flowcat import FlowCat2, ModuliEdge, ModuliPoint, classified_pairs, class_key, product_extend, validate
from .polytopes import format_coppice, top_stratum
from .shapes import EvalGrid, OneCat, ShapeBound, format_evals, make_collection, single_object_cat

logger = logging.getLogger(__name__)

ZERO_ENERGY = Fraction(0)


class Family(Enum):
    """Generator families"""
    TRIVIAL = "trivial"
    SQUARE_ZERO = "square_zero"
    ASSOC_ALGEBRA = "assoc_algebra"
    STRICT_2CAT = "strict_2cat"


@dataclass
class GenSpec:
    """Family, parameters and bounds of a generated category, kept for provenance"""
    family: Family
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    bound: Optional[Tuple[int, int, int]] = None
    cap: Fraction = DEFAULT_CAP
    epsilon: Fraction = DEFAULT_EPSILON

    def to_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family.value,
            'params': self.params,
            'seed': self.seed,
            'bound': list(self.bound) if self.bound else None,
            'cap': format_rational(self.cap),
            'epsilon': format_rational(self.epsilon),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GenSpec':
        try:
            family = Family(data['family'])
        except (KeyError, ValueError):
            raise GeneratorError(f"unknown family {data.get('family')!r}")
        bound = data.get('bound')
        return cls(
            family=family,
            params=dict(data.get('params') or {}),
            seed=int(data.get('seed', 0)),
            bound=tuple(bound) if bound else None,
            cap=parse_rational(data.get('cap', DEFAULT_CAP)),
            epsilon=parse_rational(data.get('epsilon', DEFAULT_EPSILON)),
        )

    def build(self) -> FlowCat2:
        """Run the family's constructor

        Raises:
            GeneratorError: If the parameters violate the family's precondition
        """
        params = self.params
        bounds = dict(bound=self.bound, cap=self.cap, epsilon=self.epsilon)
        if self.family is Family.TRIVIAL:
            return gen_trivial(generators=params.get('generators', ["1"]), **bounds)
        if self.family is Family.SQUARE_ZERO:
            if 'matrix' in params:
                matrix = params['matrix']
                basis = params.get('basis') or [f"b{i}" for i in range(len(matrix))]
                return gen_square_zero(basis, matrix, **bounds)
            basis, matrix = random_square_zero(int(params.get('size', 4)), params.get('rank'), self.seed)
            return gen_square_zero(basis, matrix, **bounds)
        if self.family is Family.ASSOC_ALGEBRA:
            if 'table' in params:
                table = {(x, y): tuple(zs) for x, y, zs in params['table']}
                return gen_assoc_algebra(params['basis'], table, **bounds)
            basis, table = named_algebra(params.get('algebra', 'z2'))
            return gen_assoc_algebra(basis, table, **bounds)
        return gen_strict_2cat(named_2cat(params.get('instance', 'z2')), **bounds)


# Shared assembly

def _bound(bound: Optional[Sequence[int]], default: Tuple[int, int, int]) -> ShapeBound:
    return ShapeBound(*(bound or default))


def _point(onecat: OneCat, pid: str, objects: Sequence[str], columns: Sequence[Sequence[str]],
           inputs: Sequence[Sequence[str]], output: str, energy: Fraction) -> ModuliPoint:
    collection = make_collection(onecat, objects, [columns])
    return ModuliPoint(pid, collection, EvalGrid((tuple(inputs),), (output,)), energy)


def pair_edges(cat: FlowCat2) -> FlowCat2:
    """Replace the edges by a lexicographic pairing of every equation class

    Raises:
        GeneratorError: If some class has an odd number of fiber pairs
    """
    edges: Dict[str, ModuliEdge] = {}
    for L in cat.candidate_collections():
        classes = defaultdict(list)
        for pair in classified_pairs(cat, L, cat.margin_cap):
            classes[(pair.evals, pair.energy)].append(pair.endpoint)
        for evals, energy in sorted(classes, key=lambda item: (format_evals(item[0]), item[1])):
            ends = sorted(classes[(evals, energy)], key=lambda e: (str(e.desc), e.left, e.right))
            if len(ends) % 2:
                raise GeneratorError(f"odd equation class {class_key(L, evals, energy)}")
            for first, second in zip(ends[::2], ends[1::2]):
                eid = f"edge{len(edges):05d}"
                edges[eid] = ModuliEdge(eid, L, evals, energy, (first, second))
    return cat.copy_with(edges=edges)


def _assemble(onecat: OneCat, generators: Dict[str, Tuple[str, str]], points: List[ModuliPoint],
              bound: ShapeBound, cap: Fraction, epsilon: Fraction) -> FlowCat2:
    cat = FlowCat2(onecat, generators, {p.id: p for p in points}, {}, bound, cap, epsilon)
    cat = product_extend(cat, 1)
    if bound.r >= 2:
        cat = product_extend(cat, 2)
    cat = pair_edges(cat)
    report = validate(cat)
    if not report.ok:
        raise GeneratorError(f"generated category is invalid: {report.entries[0]}")
    logger.info("generated %d points and %d edges", len(cat.points), len(cat.edges))
    return cat


# Families

def gen_trivial(onecat: Optional[OneCat] = None, generators: Sequence[str] = ("1",),
                bound: Optional[Sequence[int]] = None, cap: Fraction = DEFAULT_CAP,
                epsilon: Fraction = DEFAULT_EPSILON) -> FlowCat2:
    """All moduli empty; the generators are 2-endomorphisms of the first identity"""
    onecat = onecat or single_object_cat()
    identity = onecat.identity(onecat.objects[0])
    return _assemble(onecat, {g: (identity, identity) for g in generators}, [],
                     _bound(bound, DEFAULT_SHAPE_MAX), cap, epsilon)


def _f2_inverse(matrix: np.ndarray) -> Optional[np.ndarray]:
    """Inverse over the two-element field, or None if singular"""
    n = matrix.shape[0]
    work = np.concatenate([matrix % 2, np.eye(n, dtype=np.int64)], axis=1).astype(np.int64)
    for col in range(n):
        pivots = np.nonzero(work[col:, col])[0]
        if not len(pivots):
            return None
        pivot = col + int(pivots[0])
        if pivot != col:
            work[[col, pivot]] = work[[pivot, col]]
        for row in np.nonzero(work[:, col])[0]:
            if row != col:
                work[row] = (work[row] + work[col]) % 2
    return work[:, n:]


def random_square_zero(size: int, rank: Optional[int] = None,
                       seed: int = 0) -> Tuple[List[str], List[List[int]]]:
    """A seeded random square-zero matrix over the two-element field

    The standard nilpotent of the given rank is conjugated by a random
    invertible matrix.

    Raises:
        GeneratorError: If size is outside 1..MAX_RANDOM_BASIS or 2 * rank > size
    """
    if not 1 <= size <= MAX_RANDOM_BASIS:
        raise GeneratorError(f"basis size must be in 1..{MAX_RANDOM_BASIS}, got {size}")
    rng = np.random.default_rng(seed)
    if rank is None:
        rank = int(rng.integers(0, size // 2 + 1))
    rank = int(rank)
    if rank < 0 or 2 * rank > size:
        raise GeneratorError(f"rank {rank} impossible for a square-zero matrix of size {size}")
    base = np.zeros((size, size), dtype=np.int64)
    for i in range(rank):
        base[rank + i, i] = 1
    while True:
        change = rng.integers(0, 2, size=(size, size)).astype(np.int64)
        inverse = _f2_inverse(change)
        if inverse is not None:
            break
    matrix = (change @ base @ inverse) % 2
    return [f"b{i}" for i in range(size)], matrix.tolist()


def gen_square_zero(basis: Sequence[str], matrix: Sequence[Sequence[int]],
                    bound: Optional[Sequence[int]] = None, cap: Fraction = DEFAULT_CAP,
                    epsilon: Fraction = DEFAULT_EPSILON) -> FlowCat2:
    """Differential d with matrix[i][j] = 1 meaning b_i occurs in d(b_j)

    Raises:
        GeneratorError: If the matrix is not a 0/1 square matrix on the basis
            or does not square to zero mod 2
    """
    basis = [str(b) for b in basis]
    try:
        N = np.array(matrix, dtype=np.int64).reshape(len(basis), len(basis))
    except ValueError:
        raise GeneratorError(f"expected a square matrix of size {len(basis)}")
    if np.any((N != 0) & (N != 1)):
        raise GeneratorError("matrix entries must be 0 or 1")
    if len(set(basis)) != len(basis):
        raise GeneratorError("basis names must be distinct")
    if np.any((N @ N) % 2):
        raise GeneratorError("matrix does not square to zero mod 2")
    onecat = single_object_cat()
    points = []
    for i, j in zip(*np.nonzero(N)):
        source, target = basis[int(j)], basis[int(i)]
        points.append(_point(onecat, f"mu1[{source}>{target}]", ("M", "M"), [("e", "e")],
                             [(source,)], target, STRUCTURE_ENERGY))
    return _assemble(onecat, {b: ("e", "e") for b in basis}, points,
                     _bound(bound, DEFAULT_SHAPE_MAX), cap, epsilon)


AlgebraTable = Dict[Tuple[str, str], Tuple[str, ...]]


def named_algebra(name: str) -> Tuple[List[str], AlgebraTable]:
    """Group algebra of Z/2 ("z2") or the idempotent line x * x = x ("idempotent")"""
    if name == 'z2':
        return ["1", "g"], {("1", "1"): ("1",), ("1", "g"): ("g",), ("g", "1"): ("g",), ("g", "g"): ("1",)}
    if name == 'idempotent':
        return ["x"], {("x", "x"): ("x",)}
    raise GeneratorError(f"unknown algebra {name!r}")


def _structure_tensor(basis: Sequence[str], table: AlgebraTable) -> np.ndarray:
    index = {b: n for n, b in enumerate(basis)}
    C = np.zeros((len(basis),) * 3, dtype=np.int64)
    for (x, y), zs in table.items():
        for z in zs:
            if x not in index or y not in index or z not in index:
                raise GeneratorError(f"product {x}*{y} -> {z} leaves the basis")
            C[index[x], index[y], index[z]] ^= 1
    return C


def gen_assoc_algebra(basis: Sequence[str], table: AlgebraTable, bound: Optional[Sequence[int]] = None,
                      cap: Fraction = DEFAULT_CAP, epsilon: Fraction = DEFAULT_EPSILON) -> FlowCat2:
    """Binary operation with structure constants table[(x, y)] over the basis

    Raises:
        GeneratorError: If the product is not associative mod 2
    """
    basis = [str(b) for b in basis]
    C = _structure_tensor(basis, table)
    left = np.einsum('xym,mwz->xywz', C, C) % 2
    right = np.einsum('ywm,xmz->xywz', C, C) % 2
    if np.any(left != right):
        x, y, w, _ = (int(v) for v in np.argwhere(left != right)[0])
        raise GeneratorError(f"product is not associative on ({basis[x]}, {basis[y]}, {basis[w]})")
    onecat = single_object_cat()
    points = []
    for x, y, z in np.argwhere(C):
        a, b, c = basis[int(x)], basis[int(y)], basis[int(z)]
        points.append(_point(onecat, f"mu2[{a},{b}>{c}]", ("M", "M"), [("e", "e", "e")],
                             [(a, b)], c, STRUCTURE_ENERGY))
    return _assemble(onecat, {b: ("e", "e") for b in basis}, points,
                     _bound(bound, ASSOC_SHAPE_MAX), cap, epsilon)


# Strict 2-categories

@dataclass
class Strict2Cat:
    """Finite strict 2-category whose 2-morphisms form a basis over the two-element field

    vertical[(x, y)] is x then y; horizontal[(x, y)] has x on the first seam.
    identities maps each 1-morphism to its identity 2-morphism.
    """
    cat: OneCat
    generators: Dict[str, Tuple[str, str]]
    vertical: Dict[Tuple[str, str], str]
    horizontal: Dict[Tuple[str, str], str]
    identities: Dict[str, str]

    def between(self, f: str, g: str) -> List[str]:
        return sorted(x for x, ends in self.generators.items() if ends == (f, g))

    def _composable(self, x: str, y: str) -> bool:
        return self.cat.target(self.generators[x][0]) == self.cat.source(self.generators[y][0])

    def check_axioms(self) -> List[str]:
        """Violations of typing, associativity, unit and interchange laws"""
        problems = self.cat.check_axioms()
        if problems:
            return problems
        problems = self._typing_problems()
        if problems:
            return problems
        gens = sorted(self.generators)
        v, h, ids = self.vertical, self.horizontal, self.identities
        for x in gens:
            f, g = self.generators[x]
            if v[(ids[f], x)] != x or v[(x, ids[g])] != x:
                problems.append(f"vertical unit law fails on {x}")
            before = ids[self.cat.identity(self.cat.source(f))]
            after = ids[self.cat.identity(self.cat.target(f))]
            if h[(before, x)] != x or h[(x, after)] != x:
                problems.append(f"horizontal unit law fails on {x}")
        for x in gens:
            for y in gens:
                if self.generators[x][1] == self.generators[y][0]:
                    for z in gens:
                        if self.generators[y][1] == self.generators[z][0] and v[(v[(x, y)], z)] != v[(x, v[(y, z)])]:
                            problems.append(f"vertical composition not associative on ({x}, {y}, {z})")
                if self._composable(x, y):
                    for z in gens:
                        if self._composable(y, z) and h[(h[(x, y)], z)] != h[(x, h[(y, z)])]:
                            problems.append(f"horizontal composition not associative on ({x}, {y}, {z})")
        for f in sorted(self.cat.onemors):
            for g in sorted(self.cat.onemors):
                if self.cat.target(f) == self.cat.source(g) and h[(ids[f], ids[g])] != ids[self.cat.compose(f, g)]:
                    problems.append(f"horizontal composite of identities on ({f}, {g}) is not an identity")
        problems.extend(self._interchange_problems(gens))
        return problems

    def _typing_problems(self) -> List[str]:
        problems = []
        for f in sorted(self.cat.onemors):
            x = self.identities.get(f)
            if x is None or self.generators.get(x) != (f, f):
                problems.append(f"1-morphism {f} has no identity 2-morphism")
        gens = sorted(self.generators)
        for x in gens:
            for y in gens:
                (f, g), (g2, k) = self.generators[x], self.generators[y]
                if g == g2:
                    z = self.vertical.get((x, y))
                    if z is None or self.generators.get(z) != (f, k):
                        problems.append(f"vertical composite of ({x}, {y}) missing or mistyped")
                if self._composable(x, y):
                    try:
                        expected = (self.cat.compose(f, g2), self.cat.compose(g, k))
                    except CompositionError as e:
                        problems.append(str(e))
                        continue
                    z = self.horizontal.get((x, y))
                    if z is None or self.generators.get(z) != expected:
                        problems.append(f"horizontal composite of ({x}, {y}) missing or mistyped")
        return problems

    def _interchange_problems(self, gens: Sequence[str]) -> List[str]:
        problems = []
        v, h = self.vertical, self.horizontal
        for x in gens:
            for x2 in gens:
                if self.generators[x][1] != self.generators[x2][0]:
                    continue
                for y in gens:
                    if not self._composable(x, y):
                        continue
                    for y2 in gens:
                        if self.generators[y][1] != self.generators[y2][0]:
                            continue
                        if h[(v[(x, x2)], v[(y, y2)])] != v[(h[(x, y)], h[(x2, y2)])]:
                            problems.append(f"interchange fails on ({x}, {x2}; {y}, {y2})")
        return problems


def terminal_2cat() -> Strict2Cat:
    """One object, one 1-morphism, one 2-morphism"""
    return Strict2Cat(single_object_cat(), {"1": ("e", "e")}, {("1", "1"): "1"},
                      {("1", "1"): "1"}, {"e": "1"})


def z2_2cat() -> Strict2Cat:
    """One object and one 1-morphism whose 2-endomorphisms are the group Z/2"""
    table = {("1", "1"): "1", ("1", "g"): "g", ("g", "1"): "g", ("g", "g"): "1"}
    return Strict2Cat(single_object_cat(), {"1": ("e", "e"), "g": ("e", "e")}, dict(table),
                      dict(table), {"e": "1"})


# 1-morphisms of the matrix instance: the identities of F2^1 and F2^2 and
# the inclusion of the first coordinate
MATRICES = {
    "I1": [[1]],
    "I2": [[1, 0], [0, 1]],
    "i": [[1], [0]],
}


def matrix_cat(matrices: Optional[Dict[str, Sequence[Sequence[int]]]] = None) -> OneCat:
    """Objects are the sizes; f then g is the matrix product g @ f mod 2

    Raises:
        GeneratorError: If some composite is not among the named matrices
    """
    mats = {name: np.array(rows, dtype=np.int64) % 2 for name, rows in (matrices or MATRICES).items()}
    onemors = {name: (str(m.shape[1]), str(m.shape[0])) for name, m in mats.items()}
    compose = {}
    for f, A in mats.items():
        for g, B in mats.items():
            if A.shape[0] != B.shape[1]:
                continue
            product = (B @ A) % 2
            names = [h for h, C in mats.items() if C.shape == product.shape and np.array_equal(C, product)]
            if not names:
                raise GeneratorError(f"composite of {f} and {g} is not a named matrix")
            compose[(f, g)] = names[0]
    sizes = sorted({s for ends in onemors.values() for s in ends}, key=int)
    identities = {}
    for size in sizes:
        unit = np.eye(int(size), dtype=np.int64)
        names = [h for h, C in mats.items() if C.shape == unit.shape and np.array_equal(C, unit)]
        if not names:
            raise GeneratorError(f"no identity matrix of size {size}")
        identities[size] = names[0]
    return OneCat(sizes, onemors, compose, identities)


def scalar_2cat(cat: OneCat) -> Strict2Cat:
    """Each 1-morphism f carries the 2-endomorphisms f.0 and f.1

    Both compositions add the scalars mod 2, which satisfies interchange
    because addition is commutative.
    """
    generators = {f"{f}.{s}": (f, f) for f in sorted(cat.onemors) for s in (0, 1)}
    vertical, horizontal = {}, {}
    for f in sorted(cat.onemors):
        for s in (0, 1):
            for t in (0, 1):
                vertical[(f"{f}.{s}", f"{f}.{t}")] = f"{f}.{s ^ t}"
            for g in sorted(cat.onemors):
                if cat.target(f) != cat.source(g):
                    continue
                for t in (0, 1):
                    horizontal[(f"{f}.{s}", f"{g}.{t}")] = f"{cat.compose(f, g)}.{s ^ t}"
    return Strict2Cat(cat, generators, vertical, horizontal, {f: f"{f}.0" for f in cat.onemors})


def matrix_2cat() -> Strict2Cat:
    """F2-matrices of sizes at most 2 with scalar 2-endomorphisms"""
    return scalar_2cat(matrix_cat())


def named_2cat(name: str) -> Strict2Cat:
    if name == 'terminal':
        return terminal_2cat()
    if name == 'z2':
        return z2_2cat()
    if name == 'matrices':
        return matrix_2cat()
    raise GeneratorError(f"unknown strict 2-category {name!r}")


def _strict_points(data: Strict2Cat) -> List[ModuliPoint]:
    cat = data.cat
    mors = sorted(cat.onemors)
    points = []
    for f in mors:
        for g in mors:
            if cat.onemors[f] != cat.onemors[g]:
                continue
            for k in mors:
                if cat.onemors[k] != cat.onemors[f]:
                    continue
                for x in data.between(f, g):
                    for y in data.between(g, k):
                        points.append(_point(cat, f"vert[{x},{y}]", cat.onemors[f], [(f, g, k)],
                                             [(x, y)], data.vertical[(x, y)], STRUCTURE_ENERGY))
    for f in mors:
        for f2 in mors:
            if cat.onemors[f] != cat.onemors[f2]:
                continue
            for g in mors:
                if cat.source(g) != cat.target(f):
                    continue
                objects = (cat.source(f), cat.target(f), cat.target(g))
                for x in data.between(f, f2):
                    points.append(_point(cat, f"wl[{x},{g}]", objects, [(f, f2), (g,)], [(x,), ()],
                                         data.horizontal[(x, data.identities[g])], ZERO_ENERGY))
    for g in mors:
        for f in mors:
            if cat.source(g) != cat.target(f):
                continue
            for g2 in mors:
                if cat.onemors[g2] != cat.onemors[g]:
                    continue
                objects = (cat.source(f), cat.target(f), cat.target(g))
                for y in data.between(g, g2):
                    points.append(_point(cat, f"wr[{f},{y}]", objects, [(f,), (g, g2)], [(), (y,)],
                                         data.horizontal[(data.identities[f], y)], ZERO_ENERGY))
    return points


def gen_strict_2cat(data: Strict2Cat, bound: Optional[Sequence[int]] = None,
                    cap: Fraction = DEFAULT_CAP, epsilon: Fraction = DEFAULT_EPSILON) -> FlowCat2:
    """Vertical composition at energy 1, whiskerings at energy 0, no other operations

    Whiskering a vertical composite uses one whiskering and one vertical
    composition, while composing two whiskered inputs uses two whiskerings and
    one vertical composition. Both sides have equal energy only when
    whiskerings carry none, so they are not placed at STRUCTURE_ENERGY.

    Raises:
        GeneratorError: On an axiom violation or an odd equation class
    """
    problems = data.check_axioms()
    if problems:
        logger.warning("strict 2-category rejected: %s", problems[0])
        raise GeneratorError(problems[0])
    return _assemble(data.cat, dict(data.generators), _strict_points(data),
                     _bound(bound, STRICT_SHAPE_MAX), cap, epsilon)


# Mutation and strata

def _remove_point(cat: FlowCat2, point_id: str) -> FlowCat2:
    points = {pid: p for pid, p in cat.points.items() if pid != point_id}
    edges = {}
    for eid, edge in cat.edges.items():
        ends = tuple(end for end in edge.ends if point_id not in (end.left, end.right))
        if ends:
            edges[eid] = replace(edge, ends=ends)
    return cat.copy_with(points=points, edges=edges)


def mutate_break(cat: FlowCat2, seed: int) -> FlowCat2:
    """Remove one seed-chosen edge endpoint and the point it glues in

    The edge is chosen by the seed among the edges in the checked range, and
    the endpoint and point so that an odd number of the fiber pairs of the
    edge's class involve that point. The edge is left with one end and the
    class with an odd number of pairs, which both validate and the equation
    checks report. Other ends through the deleted point are dropped too.

    Raises:
        MutationError: If there is no edge to break
    """
    candidates = [cat.edges[eid] for eid in sorted(cat.edges)
                  if cat.edges[eid].ends and cat.edges[eid].energy <= cat.margin_cap
                  and cat.is_closed(cat.edges[eid].collection.shape)]
    if not candidates:
        raise MutationError("no edges")
    rng = random.Random(seed)
    rng.shuffle(candidates)
    for edge in candidates:
        pairs = [pair.endpoint for pair in classified_pairs(cat, edge.collection, cat.margin_cap)
                 if pair.evals == edge.evals and pair.energy == edge.energy]
        for end in edge.ends:
            rest = [e for e in edge.ends if e != end]
            for point_id in (end.right, end.left):
                involved = sum(1 for e in pairs if point_id in (e.left, e.right))
                if involved % 2 and not any(point_id in (e.left, e.right) for e in rest):
                    logger.info("removing %s from %s with point %s", end.desc, edge.id, point_id)
                    edges = dict(cat.edges)
                    edges[edge.id] = replace(edge, ends=tuple(rest))
                    return _remove_point(cat.copy_with(edges=edges), point_id)
    raise MutationError("no edge end can be broken by removing one point")


def fill_strata(cat: FlowCat2) -> FlowCat2:
    """Label every point and edge with the top stratum of its shape"""
    def label(item):
        return replace(item, stratum=format_coppice(top_stratum(item.collection.shape)))

    return cat.copy_with(points={pid: label(p) for pid, p in cat.points.items()},
                         edges={eid: label(e) for eid, e in cat.edges.items()})
