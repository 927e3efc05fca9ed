"""Novikov counting of 0-dimensional moduli and the curved (A-infinity, 2) equations

Operations are stored as tensors of generator coefficients: for a collection
L, entry (P, q) is the Novikov count of the points of L with inputs P and
outputs q. Every equation is checked on generator grids and summed exactly
over the finitely many descriptors the energy cap allows.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from ..config import DEFAULT_CAP, DEFAULT_EPSILON, DEFAULT_SHAPE_MAX
from .errors import ConvergenceError, ShapeError
from .flowcat import FlowCat2, class_key
from .novikov import ONE, ZERO, EnergyCap, NovElem, nov_count, nov_format, nov_mul, nov_sum, nov_truncate, nov_valuation
from .shapes import (Collection, EvalGrid, OneCat, Shape, ShapeBound, enum_desc, desc_collections,
                     fiber_condition, format_collection, format_evals, glue_candidates, glue_evals,
                     glue_index, zero_budget)

logger = logging.getLogger(__name__)


@dataclass
class NovTensor:
    """Coefficients of one operation on generator grids; zero entries are absent"""
    collection: Collection
    entries: Dict[EvalGrid, NovElem] = field(default_factory=dict)

    def get(self, evals: EvalGrid) -> NovElem:
        return self.entries.get(evals, ZERO)

    def valuation(self):
        return min((nov_valuation(v) for v in self.entries.values()), default=float('inf'))

    def __bool__(self) -> bool:
        return bool(self.entries)


@dataclass
class MuFamily:
    """Every extracted operation together with the bounds it was extracted in"""
    cat: OneCat
    tensors: Dict[Collection, NovTensor] = field(default_factory=dict)
    bound: ShapeBound = field(default_factory=lambda: ShapeBound(*DEFAULT_SHAPE_MAX))
    cap: Fraction = DEFAULT_CAP
    epsilon: Fraction = DEFAULT_EPSILON

    def tensor(self, collection: Collection) -> Optional[NovTensor]:
        return self.tensors.get(collection)

    def collections(self) -> List[Collection]:
        return sorted(self.tensors, key=format_collection)

    def set_entry(self, collection: Collection, evals: EvalGrid, value: NovElem) -> None:
        """Overwrite one coefficient, dropping it when zero"""
        tensor = self.tensors.setdefault(collection, NovTensor(collection))
        if value:
            tensor.entries[evals] = value
        else:
            tensor.entries.pop(evals, None)


@dataclass(frozen=True)
class Residual:
    """Nonzero left-hand side of one equation"""
    collection: Collection
    evals: EvalGrid
    value: NovElem
    terms: Tuple[str, ...] = ()

    @property
    def inputs(self):
        return self.evals.alpha

    @property
    def outputs(self):
        return self.evals.beta

    def keys(self) -> List[Tuple[str, str, str]]:
        """One class key (collection, evaluations, energy) per surviving term"""
        return [class_key(self.collection, self.evals, e) for e in self.value.terms]

    def __str__(self) -> str:
        return (f"{format_collection(self.collection)} : {format_evals(self.evals)} = "
                f"{nov_format(self.value)} [{' '.join(self.terms)}]")


def extract_mu(cat: FlowCat2, L: Collection) -> NovTensor:
    """Novikov counts of the stored points of L, truncated at the cap"""
    energies: Dict[EvalGrid, List[Fraction]] = defaultdict(list)
    for point in cat.points_at(L):
        energies[point.evals].append(point.energy)
    tensor = NovTensor(L)
    for evals in sorted(energies, key=format_evals):
        value = nov_truncate(nov_count(energies[evals]), cat.cap)
        if value:
            tensor.entries[evals] = value
    return tensor


def extract_all(cat: FlowCat2) -> MuFamily:
    """Tensors of every collection that carries points"""
    family = MuFamily(cat.cat, {}, cat.bound, cat.cap, cat.epsilon)
    for L in cat.collections():
        family.tensors[L] = extract_mu(cat, L)
    logger.debug("extracted %d tensors", len(family.tensors))
    return family


def _check_curvature(family: MuFamily, floor: Fraction, strict: bool) -> None:
    for L, tensor in family.tensors.items():
        if not L.shape.is_zero or not tensor:
            continue
        valuation = tensor.valuation()
        if valuation < floor or (strict and valuation <= floor):
            raise ConvergenceError(
                f"zero-shape operation on {format_collection(L)} has valuation {valuation}")


def equation_sums(family: MuFamily, L: Collection) -> Dict[EvalGrid, Tuple[NovElem, Tuple[str, ...]]]:
    """Left-hand side of the equation of L on every generator grid

    The sum runs over every descriptor of L within the energy budget; each
    term glues an entry of the outer tensor to an entry of the inner tensor
    whose outputs feed the identified inputs.

    Returns:
        dict: Glued evaluation grid mapped to (truncated sum, descriptors
        contributing a nonzero product)
    """
    shape = L.shape
    products: Dict[EvalGrid, List[NovElem]] = defaultdict(list)
    terms: Dict[EvalGrid, set] = defaultdict(set)
    for d in enum_desc(shape, family.cap, family.epsilon):
        outer, inner = desc_collections(L, d)
        t_in, t_out = family.tensor(outer), family.tensor(inner)
        if not t_in or not t_out:
            continue
        index = glue_index(shape, d)
        for p, v in t_in.entries.items():
            for q, w in t_out.entries.items():
                if fiber_condition(d, p, q, index) is not None:
                    continue
                product = nov_mul(v, w, family.cap)
                if not product:
                    continue
                glued = glue_evals(d, p, q, shape)
                products[glued].append(product)
                terms[glued].add(str(d))
    margin = family.cap - family.epsilon
    return {evals: (nov_truncate(nov_sum(values), margin), tuple(sorted(terms[evals])))
            for evals, values in products.items()}


def check_equations(family: MuFamily, collections: Sequence[Collection]) -> List[Residual]:
    """Residuals of the equations of the given collections, in locus order"""
    residuals = []
    for L in collections:
        sums = equation_sums(family, L)
        for evals in sorted(sums, key=format_evals):
            value, terms = sums[evals]
            if value:
                residuals.append(Residual(L, evals, value, terms))
    if residuals:
        logger.warning("%d residuals over %d collections", len(residuals), len(collections))
    return residuals


def _verified_collections(family: MuFamily, keep=None) -> List[Collection]:
    found = glue_candidates(family.collections(), family.bound, family.cap, family.epsilon)
    return [L for L in found if keep is None or keep(L.shape)]


def check_a_infty(family: MuFamily, n_max: Optional[int] = None, cap: EnergyCap = None) -> List[Residual]:
    """Curved A-infinity equations of the single-seam, single-block operations

    Args:
        family (MuFamily): Extracted operations
        n_max (int): Largest number of inputs checked, the bound's by default
        cap: Energy cap, the family's by default

    Raises:
        ConvergenceError: If a curvature term has valuation 0
    """
    family = _with_cap(family, cap)
    _check_curvature(family, Fraction(0), strict=True)
    n_max = family.bound.n if n_max is None else n_max
    return check_equations(family, _verified_collections(
        family, lambda s: s.r == 1 and s.a == 1 and s.n[0][0] <= n_max))


def check_a2(family: MuFamily, shape_max: Optional[ShapeBound] = None, cap: EnergyCap = None,
             epsilon: Optional[Fraction] = None) -> List[Residual]:
    """Curved (A-infinity, 2) equations of every closed collection

    Raises:
        ConvergenceError: If a zero-shape operation has valuation below epsilon
    """
    family = _with_cap(family, cap, epsilon, shape_max)
    if family.epsilon <= 0:
        raise ConvergenceError("epsilon must be positive")
    zero_budget(family.cap, family.epsilon)
    _check_curvature(family, family.epsilon, strict=False)
    return check_equations(family, _verified_collections(family))


def _with_cap(family: MuFamily, cap: EnergyCap = None, epsilon: Optional[Fraction] = None,
              bound: Optional[ShapeBound] = None) -> MuFamily:
    if cap is None and epsilon is None and bound is None:
        return family
    cap = family.cap if cap is None else cap
    tensors = {}
    for L, tensor in family.tensors.items():
        entries = {evals: nov_truncate(v, cap) for evals, v in tensor.entries.items()}
        tensors[L] = NovTensor(L, {evals: v for evals, v in entries.items() if v})
    return MuFamily(family.cat, tensors, bound or family.bound, cap,
                    family.epsilon if epsilon is None else epsilon)


def residual_report(residuals: Sequence[Residual]) -> str:
    """One line per residual followed by the count"""
    lines = [str(residual) for residual in residuals]
    lines.append(f"{len(residuals)} residuals")
    return "\n".join(lines)


def restrict_linear(family: MuFamily, M0: Any, M1: Any) -> MuFamily:
    """The operations with one seam and one block between M0 and M1"""
    tensors = {L: tensor for L, tensor in family.tensors.items()
               if L.shape.r == 1 and L.shape.a == 1 and L.objects == (M0, M1)}
    return MuFamily(family.cat, tensors, ShapeBound(1, 1, family.bound.n), family.cap, family.epsilon)


# Compatibility with fiber products

def _stack_collections(parts: Sequence[Collection]) -> Collection:
    first = parts[0]
    return Collection(first.cat, first.objects, tuple(part.grid[0] for part in parts))


def _product_entries(tensors: Sequence[NovTensor], cap: EnergyCap) -> Iterator[Tuple[EvalGrid, NovElem]]:
    def walk(k: int, alpha: Tuple, beta: Tuple, value: NovElem):
        if k == len(tensors):
            yield EvalGrid(alpha, beta), value
            return
        for evals, v in tensors[k].entries.items():
            product = nov_mul(value, v, cap)
            if product:
                yield from walk(k + 1, alpha + (evals.alpha[0],), beta + (evals.beta[0],), product)

    yield from walk(0, (), (), ONE)


def fiber_compat_problems(family: MuFamily, r_c: int) -> List[str]:
    """Entries of multi-block tensors of width r_c that are not blockwise products"""
    if r_c not in (1, 2):
        raise ShapeError(f"compatibility is only defined for width 1 or 2, got {r_c}")
    singles: Dict[Tuple, List[NovTensor]] = defaultdict(list)
    for L in family.collections():
        if L.shape.r == r_c and L.shape.a == 1:
            singles[L.objects].append(family.tensors[L])
    problems = []
    seen = set()
    for objects in sorted(singles, key=str):
        group = singles[objects]
        for a in range(2, family.bound.a + 1):
            for combo in _tensor_combos(group, a):
                stacked = _stack_collections([t.collection for t in combo])
                if not family.bound.contains(stacked.shape):
                    continue
                seen.add(stacked)
                expected = dict(_product_entries(combo, family.cap))
                actual = family.tensor(stacked)
                actual_entries = actual.entries if actual else {}
                for evals in sorted(set(expected) | set(actual_entries), key=format_evals):
                    want, got = expected.get(evals, ZERO), actual_entries.get(evals, ZERO)
                    if want != got:
                        problems.append(f"{format_collection(stacked)} : {format_evals(evals)} is "
                                        f"{nov_format(got)}, blockwise product {nov_format(want)}")
    for L in family.collections():
        if L.shape.r == r_c and L.shape.a >= 2 and L not in seen and family.tensors[L]:
            problems.append(f"{format_collection(L)} has entries but its blocks carry none")
    return problems


def _tensor_combos(items: Sequence[NovTensor], count: int) -> Iterator[Tuple[NovTensor, ...]]:
    if count == 0:
        yield ()
        return
    for item in items:
        for rest in _tensor_combos(items, count - 1):
            yield (item,) + rest


def check_fiber_compat_linear(family: MuFamily, r_c: int) -> bool:
    """Every multi-block tensor of width r_c is the tensor product of its blocks"""
    problems = fiber_compat_problems(family, r_c)
    for problem in problems:
        logger.warning("not fiber compatible: %s", problem)
    return not problems


def is_fiber_compatible(family: MuFamily) -> bool:
    return check_fiber_compat_linear(family, 1) and check_fiber_compat_linear(family, 2)


# Bifunctor relation

def _single(cat: OneCat, objects: Tuple, columns: Sequence[Sequence[Any]]) -> Collection:
    return Collection(cat, tuple(objects), (tuple(tuple(col) for col in columns),))


def _unary_entries(family: MuFamily, objects: Tuple, column: Sequence[Any]) -> Dict[EvalGrid, NovElem]:
    tensor = family.tensor(_single(family.cat, objects, [column]))
    return tensor.entries if tensor else {}


def bifunctor_identity_check(family: MuFamily, cap: EnergyCap = None) -> List[Residual]:
    """First bifunctor relation with figure-eight corrections

    For every width-2 single-block collection with one input on one seam and
    none on the other, sums the differential applied before and after the
    whiskering operation and, for each b, the b-ary composition of the
    whiskered input stacked with b - 1 figure-eight terms. Multi-block
    operations are rebuilt as blockwise products, so the check is independent
    of the stored width-2 multi-block tensors.

    Raises:
        ConvergenceError: If a disk curvature is nonzero or a figure-eight term
            has valuation below epsilon
    """
    family = _with_cap(family, cap)
    cap = family.cap
    margin = cap - family.epsilon
    for L, tensor in family.tensors.items():
        if tensor and L.shape == Shape(1, 1, ((0,),)):
            raise ConvergenceError(f"disk curvature on {format_collection(L)} must vanish")
        if tensor and L.shape == Shape(2, 1, ((0, 0),)) and tensor.valuation() < family.epsilon:
            raise ConvergenceError(f"figure-eight term on {format_collection(L)} has valuation below epsilon")
    max_b = 1 + int(cap / family.epsilon)
    residuals = []
    for L in family.collections():
        if L.shape not in (Shape(2, 1, ((1, 0),)), Shape(2, 1, ((0, 1),))):
            continue
        sums = _bifunctor_sums(family, L, max_b)
        for evals in sorted(sums, key=format_evals):
            value = nov_truncate(nov_sum(sums[evals]), margin)
            if value:
                residuals.append(Residual(L, evals, value, ("bifunctor",)))
    return residuals


def _bifunctor_sums(family: MuFamily, L: Collection, max_b: int) -> Dict[EvalGrid, List[NovElem]]:
    cat, cap = family.cat, family.cap
    objects = L.objects
    column = 0 if L.shape.n[0] == (1, 0) else 1
    moving = L.grid[0][column]
    fixed = L.grid[0][1 - column]
    whisker = family.tensor(L)
    sums: Dict[EvalGrid, List[NovElem]] = defaultdict(list)
    if not whisker:
        return sums

    def with_input(x: Any) -> Tuple:
        alpha = [(), ()]
        alpha[column] = (x,)
        return (tuple(alpha),)

    # differential before the whiskering
    seam = (objects[column], objects[column + 1])
    for d_evals, d_value in _unary_entries(family, seam, moving).items():
        x, y = d_evals.alpha[0][0][0], d_evals.beta[0]
        for w_evals, w_value in whisker.entries.items():
            if w_evals.alpha[0][column][0] == y:
                glued = EvalGrid(with_input(x), w_evals.beta)
                sums[glued].append(nov_mul(d_value, w_value, cap))

    # figure-eight terms over the source and the target of the moving column
    composite = [cat.compose(moving[k], fixed[0]) if column == 0 else cat.compose(fixed[0], moving[k])
                 for k in range(2)]
    fig_objects = objects
    figure = []
    for k in range(2):
        cols = [(moving[k],), fixed] if column == 0 else [fixed, (moving[k],)]
        tensor = family.tensor(_single(cat, fig_objects, cols))
        figure.append(tensor.entries if tensor else {})

    outer_objects = (objects[0], objects[2])
    for b in range(1, max_b + 1):
        for position in range(b):
            rows = [composite[0]] * (position + 1) + [composite[1]] * (b - position)
            outer = _unary_entries(family, outer_objects, rows)
            if not outer:
                continue
            factors = ([figure[0]] * position + [None] + [figure[1]] * (b - position - 1))
            for w_evals, w_value in whisker.entries.items():
                for outputs, value in _stacked_outputs(factors, w_evals.beta[0], w_value, cap):
                    for o_evals, o_value in outer.items():
                        if o_evals.alpha[0][0] == outputs:
                            glued = EvalGrid(w_evals.alpha, o_evals.beta)
                            sums[glued].append(nov_mul(value, o_value, cap))
    return sums


def _stacked_outputs(factors, whisker_out: Any, whisker_value: NovElem,
                     cap: EnergyCap) -> Iterator[Tuple[Tuple[Any, ...], NovElem]]:
    """Output tuples of the stacked factors with their product coefficients"""
    def walk(k: int, outputs: Tuple, value: NovElem):
        if k == len(factors):
            yield outputs, value
            return
        if factors[k] is None:
            yield from walk(k + 1, outputs + (whisker_out,), value)
            return
        for evals, v in factors[k].items():
            product = nov_mul(value, v, cap)
            if product:
                yield from walk(k + 1, outputs + (evals.beta[0],), product)

    yield from walk(0, (), whisker_value)
