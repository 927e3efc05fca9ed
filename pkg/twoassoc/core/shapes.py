"""Shapes, collections of 1-morphisms and boundary decomposition descriptors"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import floor
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import CompositionError, ConvergenceError, FiberMismatchError, ShapeError
from .novikov import EnergyCap

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]
Matrix = Tuple[Block, ...]


@dataclass(frozen=True)
class Shape:
    """Width r, block count a and the a-by-r matrix of marked-point counts"""
    r: int
    a: int
    n: Matrix

    def __post_init__(self):
        n = tuple(tuple(int(x) for x in block) for block in self.n)
        object.__setattr__(self, 'n', n)
        if self.r < 1 or self.a < 1:
            raise ShapeError(f"shape needs r >= 1 and a >= 1, got r={self.r}, a={self.a}")
        if len(n) != self.a or any(len(block) != self.r for block in n):
            raise ShapeError(f"matrix {n} is not {self.a}-by-{self.r}")
        if any(x < 0 for block in n for x in block):
            raise ShapeError(f"negative entry in {n}")

    @classmethod
    def of(cls, n: Sequence[Sequence[int]]) -> 'Shape':
        n = tuple(tuple(block) for block in n)
        if not n:
            raise ShapeError("shape needs at least one block")
        return cls(len(n[0]), len(n), n)

    @property
    def masses(self) -> Tuple[int, ...]:
        return tuple(sum(block) for block in self.n)

    @property
    def is_zero(self) -> bool:
        """All marked-point counts vanish"""
        return not any(self.masses)

    def __str__(self) -> str:
        return format_shape(self)


def format_shape(shape: Shape) -> str:
    blocks = ",".join("(" + ",".join(str(x) for x in block) + ")" for block in shape.n)
    return f"({shape.r},{shape.a},({blocks}))"


def parse_shape(text: str) -> Shape:
    """Parse "(r,a,((..),(..)))" """
    numbers = [int(x) for x in re.findall(r"-?\d+", text)]
    if len(numbers) < 3:
        raise ShapeError(f"malformed shape {text!r}")
    r, a, entries = numbers[0], numbers[1], numbers[2:]
    if len(entries) != r * a:
        raise ShapeError(f"shape {text!r} needs {r * a} entries")
    return Shape(r, a, tuple(tuple(entries[j * r:(j + 1) * r]) for j in range(a)))


@dataclass(frozen=True)
class ShapeBound:
    """Bound on width, block count and the mass of every block"""
    r: int
    a: int
    n: int

    def contains(self, shape: Shape) -> bool:
        return shape.r <= self.r and shape.a <= self.a and all(m <= self.n for m in shape.masses)

    def shapes(self) -> Iterator[Shape]:
        """Every shape inside the bound, by width then block count"""
        for r in range(1, self.r + 1):
            blocks = [block for block in _blocks(r, self.n)]
            for a in range(1, self.a + 1):
                for combo in _tuples(blocks, a):
                    yield Shape(r, a, combo)

    def to_list(self) -> List[int]:
        return [self.r, self.a, self.n]


def _blocks(r: int, mass: int) -> List[Block]:
    found = []
    for total in range(mass + 1):
        found.extend(_weak(total, r))
    return found


def _weak(total: int, parts: int) -> List[Block]:
    if parts == 1:
        return [(total,)]
    return [(first,) + rest for first in range(total + 1) for rest in _weak(total - first, parts - 1)]


def _tuples(items, count):
    if count == 0:
        yield ()
        return
    for item in items:
        for rest in _tuples(items, count - 1):
            yield (item,) + rest


# 1-categories

class OneCat:
    """Finite 1-category given by tables; composition is written left to right"""

    def __init__(self, objects: Sequence[str], onemors: Dict[str, Tuple[str, str]],
                 compose: Dict[Tuple[str, str], str], identities: Dict[str, str]):
        self.objects = tuple(objects)
        self.onemors = dict(onemors)
        self.table = dict(compose)
        self.identities = dict(identities)
        for obj in self.objects:
            if obj not in self.identities:
                raise CompositionError(f"object {obj} has no identity")

    def source(self, f: str) -> str:
        try:
            return self.onemors[f][0]
        except KeyError:
            raise CompositionError(f"unknown 1-morphism {f}")

    def target(self, f: str) -> str:
        try:
            return self.onemors[f][1]
        except KeyError:
            raise CompositionError(f"unknown 1-morphism {f}")

    def identity(self, obj: str) -> str:
        return self.identities[obj]

    def compose(self, f: str, g: str) -> str:
        """The composite f then g"""
        if self.target(f) != self.source(g):
            raise CompositionError(f"{f} and {g} are not composable")
        if f == self.identities.get(self.source(f)):
            return g
        if g == self.identities.get(self.target(g)):
            return f
        try:
            return self.table[(f, g)]
        except KeyError:
            raise CompositionError(f"no composite for ({f}, {g})")

    def hom(self, a: str, b: str) -> List[str]:
        return sorted(f for f, (s, t) in self.onemors.items() if s == a and t == b)

    def format_mor(self, f: str) -> str:
        return f

    def check_axioms(self) -> List[str]:
        """Violations of totality, associativity and the identity laws"""
        problems = []
        mors = sorted(self.onemors)
        for f in mors:
            for g in mors:
                if self.target(f) != self.source(g):
                    continue
                try:
                    fg = self.compose(f, g)
                except CompositionError as e:
                    problems.append(str(e))
                    continue
                if (self.source(fg), self.target(fg)) != (self.source(f), self.target(g)):
                    problems.append(f"composite of ({f}, {g}) has wrong endpoints")
                for h in mors:
                    if self.target(g) != self.source(h):
                        continue
                    try:
                        if self.compose(fg, h) != self.compose(f, self.compose(g, h)):
                            problems.append(f"composition not associative on ({f}, {g}, {h})")
                    except CompositionError as e:
                        problems.append(str(e))
        return problems

    def to_dict(self) -> Dict[str, Any]:
        return {
            'objects': list(self.objects),
            'onemors': {f: list(ends) for f, ends in sorted(self.onemors.items())},
            'identities': dict(sorted(self.identities.items())),
            'compose': [[f, g, h] for (f, g), h in sorted(self.table.items())],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'OneCat':
        return cls(
            data['objects'],
            {f: (ends[0], ends[1]) for f, ends in data['onemors'].items()},
            {(f, g): h for f, g, h in data.get('compose', [])},
            data['identities'],
        )


def single_object_cat() -> OneCat:
    """One object M whose only 1-morphism is its identity"""
    return OneCat(("M",), {"e": ("M", "M")}, {("e", "e"): "e"}, {"M": "e"})


PathMor = Tuple[int, int, Tuple[str, ...]]


class PathCat:
    """Free category on the linear quiver M_0 -> ... -> M_r with named cells

    A 1-morphism is (source, target, cells); composition concatenates cells.
    """

    def __init__(self, r: int):
        self.objects = tuple(range(r + 1))

    def __eq__(self, other) -> bool:
        return isinstance(other, PathCat) and other.objects == self.objects

    def __hash__(self) -> int:
        return hash(self.objects)

    def source(self, f: PathMor) -> int:
        return f[0]

    def target(self, f: PathMor) -> int:
        return f[1]

    def identity(self, obj: int) -> PathMor:
        return (obj, obj, ())

    def compose(self, f: PathMor, g: PathMor) -> PathMor:
        if f[1] != g[0]:
            raise CompositionError(f"paths {f} and {g} are not composable")
        return (f[0], g[1], f[2] + g[2])

    def format_mor(self, f: PathMor) -> str:
        return ".".join(f[2]) if f[2] else f"id{f[0]}"


def cell(i: int, j: int, k: int) -> PathMor:
    return (i - 1, i, (f"L{i}.{j}.{k}",))


# Collections

Grid = Tuple[Tuple[Tuple[Any, ...], ...], ...]


@dataclass(frozen=True)
class Collection:
    """Grid L^{j,k}_{(i-1)i} stored as grid[j-1][i-1][k] with objects M_0..M_r"""
    cat: Any = field(compare=False, repr=False, hash=False)
    objects: Tuple[Any, ...]
    grid: Grid

    @property
    def shape(self) -> Shape:
        return Shape(len(self.objects) - 1, len(self.grid),
                     tuple(tuple(len(col) - 1 for col in block) for block in self.grid))

    def column(self, j: int, i: int) -> Tuple[Any, ...]:
        """Column of block j over seam i, both 1-based"""
        return self.grid[j - 1][i - 1]

    def composite(self, j: int, ks: Sequence[int], lo: int = 1, hi: Optional[int] = None) -> Any:
        """Composite over seams lo..hi of block j, taking row ks[i-lo] on seam i"""
        hi = len(self.objects) - 1 if hi is None else hi
        result = None
        for i, k in zip(range(lo, hi + 1), ks):
            entry = self.grid[j - 1][i - 1][k]
            result = entry if result is None else self.cat.compose(result, entry)
        return result

    @cached_property
    def ends(self) -> Tuple[Tuple[Any, Any], ...]:
        """Per block, the composites of the first and of the last rows"""
        found = []
        for j, block in enumerate(self.grid, start=1):
            first = self.composite(j, [0] * len(block))
            last = self.composite(j, [len(col) - 1 for col in block])
            found.append((first, last))
        return tuple(found)

    def alpha_pair(self, i: int, j: int, k: int) -> Tuple[Any, Any]:
        """Source and target of the 2-morphism at input slot (i, j, k), k >= 1"""
        col = self.column(j, i)
        return col[k - 1], col[k]

    def __str__(self) -> str:
        return format_collection(self)


def make_collection(cat, objects: Sequence[Any], grid: Sequence[Sequence[Sequence[Any]]]) -> Collection:
    """Build a collection and check every entry's endpoints

    Raises:
        CompositionError: Names the first offending cell (i, j, k)
    """
    objects = tuple(objects)
    grid = tuple(tuple(tuple(col) for col in block) for block in grid)
    r = len(objects) - 1
    if r < 1 or not grid:
        raise ShapeError("a collection needs at least one seam and one block")
    for j, block in enumerate(grid, start=1):
        if len(block) != r:
            raise ShapeError(f"block {j} has {len(block)} columns, expected {r}")
        for i, col in enumerate(block, start=1):
            if not col:
                raise ShapeError(f"empty column at (i={i},j={j})")
            for k, f in enumerate(col):
                if cat.source(f) != objects[i - 1] or cat.target(f) != objects[i]:
                    raise CompositionError(f"endpoint mismatch at (i={i},j={j},k={k})")
    collection = Collection(cat, objects, grid)
    collection.ends
    return collection


def symbolic_collection(shape: Shape) -> Collection:
    """Collection over the path category with one named cell per grid entry"""
    cat = PathCat(shape.r)
    grid = tuple(tuple(tuple(cell(i, j, k) for k in range(count + 1))
                       for i, count in enumerate(block, start=1))
                 for j, block in enumerate(shape.n, start=1))
    return make_collection(cat, cat.objects, grid)


def format_collection(collection: Collection) -> str:
    fmt = collection.cat.format_mor
    objects = ">".join(str(obj) for obj in collection.objects)
    blocks = " / ".join(" | ".join(",".join(fmt(f) for f in col) for col in block)
                        for block in collection.grid)
    return f"[{objects}] {blocks}"


def enum_collections(cat: OneCat, shape: Shape) -> List[Collection]:
    """All collections of the given shape over a finite 1-category"""
    found = []
    for chain in _object_chains(cat, shape.r):
        homs = [cat.hom(chain[i], chain[i + 1]) for i in range(shape.r)]
        if any(not hom for hom in homs):
            continue
        columns = []
        for block in shape.n:
            columns.append([list(_tuples(homs[i], count + 1)) for i, count in enumerate(block)])
        for grid in _grids(columns):
            found.append(Collection(cat, tuple(chain), grid))
    return found


def _object_chains(cat: OneCat, r: int) -> Iterator[Tuple[str, ...]]:
    for chain in _tuples(sorted(cat.objects), r + 1):
        yield chain


def _grids(columns) -> Iterator[Grid]:
    blocks_options = [list(_tuples_of(block)) for block in columns]
    for combo in _product_lists(blocks_options):
        yield combo


def _tuples_of(block_columns) -> Iterator[Tuple[Tuple[Any, ...], ...]]:
    yield from _product_lists(block_columns)


def _product_lists(options) -> Iterator[tuple]:
    if not options:
        yield ()
        return
    for head in options[0]:
        for tail in _product_lists(options[1:]):
            yield (head,) + tail


# Descriptors

@dataclass(frozen=True)
class Type1:
    """Insertion of t points at position s on seam i of block j"""
    i: int
    j: int
    s: int
    t: int

    def __str__(self) -> str:
        return f"T1({self.i},{self.j},{self.s},{self.t})"


@dataclass(frozen=True)
class Type2:
    """Collision of seams s+1..s+t with one partition per block"""
    s: int
    t: int
    parts: Tuple[Tuple[Block, ...], ...]

    def __str__(self) -> str:
        blocks = ";".join("[" + "|".join(_format_vec(m) for m in parts) + "]" for parts in self.parts)
        return f"T2({self.s},{self.t};{blocks})"


@dataclass(frozen=True)
class Type3:
    """Collision of all seams in block j with the given partition"""
    j: int
    parts: Tuple[Block, ...]

    def __str__(self) -> str:
        return f"T3({self.j};[" + "|".join(_format_vec(m) for m in self.parts) + "])"


Descriptor = Union[Type1, Type2, Type3]


def _format_vec(vec: Block) -> str:
    return "(" + ",".join(str(x) for x in vec) + ")"


def _parse_parts(text: str) -> Tuple[Block, ...]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"malformed partition {text!r}")
    body = text[1:-1]
    vecs = []
    for piece in body.split("|"):
        piece = piece.strip()
        if not (piece.startswith("(") and piece.endswith(")")):
            raise ValueError(f"malformed part {piece!r}")
        vecs.append(tuple(int(x) for x in piece[1:-1].split(",")))
    return tuple(vecs)


def parse_desc(text: str) -> Descriptor:
    """Parse the text form of a descriptor"""
    text = text.replace(" ", "")
    match = re.fullmatch(r"T1\((\d+),(\d+),(\d+),(\d+)\)", text)
    if match:
        return Type1(*(int(g) for g in match.groups()))
    match = re.fullmatch(r"T2\((\d+),(\d+);(.*)\)", text)
    if match:
        blocks = tuple(_parse_parts(part) for part in match.group(3).split(";"))
        return Type2(int(match.group(1)), int(match.group(2)), blocks)
    match = re.fullmatch(r"T3\((\d+);(.*)\)", text)
    if match:
        return Type3(int(match.group(1)), _parse_parts(match.group(2)))
    raise ValueError(f"malformed descriptor {text!r}")


@lru_cache(maxsize=None)
def _vector_compositions(vec: Block, max_zero: int) -> Tuple[Tuple[Block, ...], ...]:
    found = []
    if not any(vec):
        found.append(())
    for first in _below(vec):
        rest = tuple(v - f for v, f in zip(vec, first))
        for tail in _vector_compositions(rest, max_zero):
            found.append((first,) + tail)
    if max_zero > 0:
        zero = tuple(0 for _ in vec)
        for tail in _vector_compositions(vec, max_zero - 1):
            found.append((zero,) + tail)
    return tuple(found)


def _below(vec: Block) -> Iterator[Block]:
    """Nonzero vectors dominated by vec"""
    for candidate in _box(vec):
        if any(candidate):
            yield candidate


def _box(vec: Block) -> Iterator[Block]:
    if not vec:
        yield ()
        return
    for head in range(vec[0] + 1):
        for tail in _box(vec[1:]):
            yield (head,) + tail


def vector_compositions(vec: Sequence[int], min_parts: int = 1, max_zero: int = 0) -> List[Tuple[Block, ...]]:
    """Ordered sequences of vectors summing to vec

    Args:
        vec: Target vector
        min_parts (int): Least number of parts
        max_zero (int): Most zero parts allowed; the others are nonzero

    Returns:
        list: The sequences, each a tuple of vectors
    """
    vec = tuple(vec)
    return [parts for parts in _vector_compositions(vec, max_zero) if len(parts) >= min_parts]


def zero_budget(cap: EnergyCap, epsilon: Fraction) -> int:
    """Most optional zero parts whose terms stay inside the verification range

    Each zero part costs at least epsilon, and terms above cap - epsilon are
    never verified.
    """
    if cap is None or epsilon <= 0:
        raise ConvergenceError("zero parts need a bounded cap and a positive epsilon")
    return max(0, floor((cap - epsilon) / epsilon))


def enum_desc(shape: Shape, cap: EnergyCap, epsilon: Fraction, zero_parts: bool = True) -> List[Descriptor]:
    """All descriptors whose terms can contribute below the cap

    A block whose segment is all zero always takes one zero part; further
    zero parts are bounded by zero_budget.

    Raises:
        ConvergenceError: If zero parts are asked for without a bound
    """
    budget = zero_budget(cap, epsilon) if zero_parts else 0
    found: List[Descriptor] = []
    for j, block in enumerate(shape.n, start=1):
        for i, count in enumerate(block, start=1):
            for t in range(count + 1):
                for s in range(count - t + 1):
                    found.append(Type1(i, j, s, t))
    r = shape.r
    if r >= 3:
        for t in range(2, r):
            for s in range(r - t + 1):
                options = []
                for block in shape.n:
                    segment = block[s:s + t]
                    mandatory = 0 if any(segment) else 1
                    options.append([(parts, _zeros(parts) - mandatory)
                                    for parts in vector_compositions(segment, 1, budget + mandatory)])
                for combo in _product_lists(options):
                    if sum(extra for _, extra in combo) <= budget:
                        found.append(Type2(s, t, tuple(parts for parts, _ in combo)))
    if r >= 2:
        for j, block in enumerate(shape.n, start=1):
            mandatory = 0 if any(block) else 1
            for parts in vector_compositions(block, 1, budget + mandatory):
                found.append(Type3(j, parts))
    logger.debug("shape %s has %d descriptors", shape, len(found))
    return found


def _zeros(parts: Sequence[Block]) -> int:
    return sum(1 for part in parts if not any(part))


def check_desc(shape: Shape, d: Descriptor) -> None:
    """Raises ShapeError unless the descriptor is valid for the shape"""
    if isinstance(d, Type1):
        if not (1 <= d.i <= shape.r and 1 <= d.j <= shape.a):
            raise ShapeError(f"{d} out of range for {shape}")
        if d.s < 0 or d.t < 0 or d.s + d.t > shape.n[d.j - 1][d.i - 1]:
            raise ShapeError(f"{d} needs s + t <= n_i^j in {shape}")
    elif isinstance(d, Type2):
        if shape.r < 3 or not 2 <= d.t <= shape.r - 1 or d.s < 0 or d.s + d.t > shape.r:
            raise ShapeError(f"{d} invalid for width {shape.r}")
        if len(d.parts) != shape.a:
            raise ShapeError(f"{d} needs one partition per block")
        for block, parts in zip(shape.n, d.parts):
            _check_partition(parts, block[d.s:d.s + d.t], d)
    elif isinstance(d, Type3):
        if shape.r < 2 or not 1 <= d.j <= shape.a:
            raise ShapeError(f"{d} invalid for {shape}")
        _check_partition(d.parts, shape.n[d.j - 1], d)
    else:
        raise ShapeError(f"not a descriptor: {d!r}")


def _check_partition(parts: Sequence[Block], target: Block, d: Descriptor) -> None:
    if not parts:
        raise ShapeError(f"{d} needs at least one part")
    if any(len(part) != len(target) or any(x < 0 for x in part) for part in parts):
        raise ShapeError(f"{d} has a malformed part")
    if tuple(sum(col) for col in zip(*parts)) != tuple(target):
        raise ShapeError(f"parts of {d} do not sum to {target}")


def desc_shapes(shape: Shape, d: Descriptor) -> Tuple[Shape, Shape]:
    """Shapes of the outer and inner collections of a boundary term"""
    check_desc(shape, d)
    if isinstance(d, Type1):
        n = [list(block) for block in shape.n]
        n[d.j - 1][d.i - 1] -= d.t - 1
        return Shape(shape.r, shape.a, tuple(tuple(block) for block in n)), Shape(1, 1, ((d.t,),))
    if isinstance(d, Type2):
        blocks = tuple(block[:d.s] + (len(parts),) + block[d.s + d.t:]
                       for block, parts in zip(shape.n, d.parts))
        stacked = tuple(part for parts in d.parts for part in parts)
        return Shape(shape.r - d.t + 1, shape.a, blocks), Shape(d.t, len(stacked), stacked)
    b = len(d.parts)
    blocks = shape.n[:d.j - 1] + tuple(d.parts) + shape.n[d.j:]
    return Shape(1, 1, ((b,),)), Shape(shape.r, shape.a + b - 1, blocks)


def glued_shape(desc: Descriptor, outer: Shape, inner: Shape) -> Shape:
    """Shape of the collection whose boundary the descriptor describes"""
    if isinstance(desc, Type1):
        n = [list(block) for block in outer.n]
        n[desc.j - 1][desc.i - 1] += desc.t - 1
        return Shape(outer.r, outer.a, tuple(tuple(block) for block in n))
    if isinstance(desc, Type2):
        blocks = []
        for j, parts in enumerate(desc.parts):
            block = outer.n[j]
            middle = tuple(sum(part[k] for part in parts) for k in range(desc.t))
            blocks.append(block[:desc.s] + middle + block[desc.s + 1:])
        return Shape(outer.r + desc.t - 1, outer.a, tuple(blocks))
    b = len(desc.parts)
    merged = tuple(sum(part[k] for part in desc.parts) for k in range(inner.r))
    blocks = inner.n[:desc.j - 1] + (merged,) + inner.n[desc.j - 1 + b:]
    return Shape(inner.r, inner.a - b + 1, blocks)


def _cumulative(parts: Sequence[Block]) -> List[Block]:
    """Partial sums 0, m^1, m^1 + m^2, ..."""
    width = len(parts[0])
    sums = [tuple(0 for _ in range(width))]
    for part in parts:
        sums.append(tuple(x + y for x, y in zip(sums[-1], part)))
    return sums


def desc_collections(collection: Collection, d: Descriptor) -> Tuple[Collection, Collection]:
    """Outer and inner collections of a boundary term"""
    shape = collection.shape
    check_desc(shape, d)
    cat, objects, grid = collection.cat, collection.objects, collection.grid
    if isinstance(d, Type1):
        col = grid[d.j - 1][d.i - 1]
        blocks = [list(block) for block in grid]
        blocks[d.j - 1][d.i - 1] = col[:d.s + 1] + col[d.s + d.t:]
        outer = Collection(cat, objects, tuple(tuple(block) for block in blocks))
        inner = Collection(cat, (objects[d.i - 1], objects[d.i]), (((col[d.s:d.s + d.t + 1]),),))
        return outer, inner
    if isinstance(d, Type2):
        outer_blocks, inner_blocks = [], []
        for j, (block, parts) in enumerate(zip(grid, d.parts), start=1):
            sums = _cumulative(parts)
            middle = tuple(collection.composite(j, cum, d.s + 1, d.s + d.t) for cum in sums)
            outer_blocks.append(block[:d.s] + (middle,) + block[d.s + d.t:])
            for lo, hi in zip(sums, sums[1:]):
                inner_blocks.append(tuple(block[d.s + c][lo[c]:hi[c] + 1] for c in range(d.t)))
        outer = Collection(cat, objects[:d.s + 1] + objects[d.s + d.t:], tuple(outer_blocks))
        inner = Collection(cat, objects[d.s:d.s + d.t + 1], tuple(inner_blocks))
        return outer, inner
    sums = _cumulative(d.parts)
    block = grid[d.j - 1]
    column = tuple(collection.composite(d.j, cum) for cum in sums)
    outer = Collection(cat, (objects[0], objects[-1]), ((column,),))
    split = tuple(tuple(block[i][lo[i]:hi[i] + 1] for i in range(len(block)))
                  for lo, hi in zip(sums, sums[1:]))
    inner = Collection(cat, objects, grid[:d.j - 1] + split + grid[d.j:])
    return outer, inner


def glue_collections(d: Descriptor, outer: Collection, inner: Collection) -> Collection:
    """Collection whose boundary term the pair (outer, inner) is

    Raises:
        CompositionError: If the two collections do not fit together
    """
    cat = outer.cat
    if isinstance(d, Type1):
        blocks = [list(block) for block in outer.grid]
        col = blocks[d.j - 1][d.i - 1]
        piece = inner.grid[0][0]
        if col[d.s] != piece[0] or col[d.s + 1] != piece[-1]:
            raise CompositionError(f"inner column does not fit slot {d.s + 1} of {d}")
        blocks[d.j - 1][d.i - 1] = col[:d.s] + piece + col[d.s + 2:]
        glued = Collection(cat, outer.objects, tuple(tuple(block) for block in blocks))
    elif isinstance(d, Type2):
        blocks = []
        offset = 0
        for j, outer_block in enumerate(outer.grid):
            parts = inner.grid[offset:offset + len(d.parts[j])]
            offset += len(d.parts[j])
            middle = tuple(_join_columns([part[c] for part in parts]) for c in range(d.t))
            blocks.append(outer_block[:d.s] + middle + outer_block[d.s + 1:])
        objects = outer.objects[:d.s] + inner.objects + outer.objects[d.s + 2:]
        glued = Collection(cat, objects, tuple(blocks))
    else:
        b = len(d.parts)
        parts = inner.grid[d.j - 1:d.j - 1 + b]
        merged = tuple(_join_columns([part[i] for part in parts]) for i in range(len(inner.objects) - 1))
        glued = Collection(cat, inner.objects, inner.grid[:d.j - 1] + (merged,) + inner.grid[d.j - 1 + b:])
    check_outer, check_inner = desc_collections(glued, d)
    if check_outer != outer or check_inner != inner:
        raise CompositionError(f"collections do not glue along {d}")
    return glued


def _join_columns(columns: Sequence[Tuple[Any, ...]]) -> Tuple[Any, ...]:
    joined = tuple(columns[0])
    for col in columns[1:]:
        if joined[-1] != col[0]:
            raise CompositionError("consecutive parts do not share an endpoint")
        joined = joined + tuple(col[1:])
    return joined


# Verification range

@lru_cache(maxsize=None)
def desc_set(shape: Shape, cap: Fraction, epsilon: Fraction) -> FrozenSet[Descriptor]:
    return frozenset(enum_desc(shape, cap, epsilon))


@lru_cache(maxsize=None)
def is_closed(bound: ShapeBound, shape: Shape, cap: Fraction, epsilon: Fraction) -> bool:
    """The shape and both shapes of each of its descriptors lie in the bound

    Only closed shapes have every term of their equation available, so
    validation and the equation checks are restricted to them.
    """
    if not bound.contains(shape):
        return False
    return all(bound.contains(s) for d in desc_set(shape, cap, epsilon) for s in desc_shapes(shape, d))


def descriptors_between(outer: Shape, inner: Shape) -> List[Descriptor]:
    """Descriptors whose outer and inner shapes are the given ones"""
    found: List[Descriptor] = []
    if inner.r == 1 and inner.a == 1:
        t = inner.n[0][0]
        for j, block in enumerate(outer.n, start=1):
            for i, count in enumerate(block, start=1):
                for s in range(count):
                    found.append(Type1(i, j, s, t))
    if outer.r >= 2 and inner.r >= 2:
        for s in range(outer.r):
            counts = [block[s] for block in outer.n]
            if min(counts) < 1 or sum(counts) != inner.a:
                continue
            offsets = _offsets(counts)
            parts = tuple(inner.n[lo:lo + count] for lo, count in zip(offsets, counts))
            found.append(Type2(s, inner.r, parts))
    if outer.r == 1 and outer.a == 1 and inner.r >= 2:
        b = outer.n[0][0]
        for j in range(1, inner.a - b + 2) if b >= 1 else ():
            found.append(Type3(j, inner.n[j - 1:j - 1 + b]))
    return found


def glue_candidates(collections: Sequence[Collection], bound: ShapeBound, cap: Fraction,
                    epsilon: Fraction) -> List[Collection]:
    """Closed collections with a boundary term built from two of the given ones"""
    found = set()
    for outer in collections:
        for inner in collections:
            for d in descriptors_between(outer.shape, inner.shape):
                try:
                    glued = glue_collections(d, outer, inner)
                except (CompositionError, ShapeError):
                    continue
                shape = glued.shape
                if is_closed(bound, shape, cap, epsilon) and d in desc_set(shape, cap, epsilon):
                    found.add(glued)
    return sorted(found, key=format_collection)


# Evaluation grids

@dataclass(frozen=True)
class EvalGrid:
    """Input generators alpha[j-1][i-1][k-1] and output generators beta[j-1]"""
    alpha: Tuple[Tuple[Tuple[Any, ...], ...], ...]
    beta: Tuple[Any, ...]

    def __post_init__(self):
        object.__setattr__(self, 'alpha', tuple(tuple(tuple(col) for col in block) for block in self.alpha))
        object.__setattr__(self, 'beta', tuple(self.beta))
        if len(self.alpha) != len(self.beta):
            raise ShapeError("one output generator per block is required")

    @property
    def shape(self) -> Shape:
        return Shape(len(self.alpha[0]), len(self.alpha),
                     tuple(tuple(len(col) for col in block) for block in self.alpha))

    def __str__(self) -> str:
        return format_evals(self)


def format_evals(ev: EvalGrid) -> str:
    blocks = " / ".join(" | ".join(",".join(str(x) for x in col) for col in block) for block in ev.alpha)
    return f"{blocks} -> " + ",".join(str(b) for b in ev.beta)


@dataclass(frozen=True)
class GlueIndex:
    """Provenance of every slot of a glued evaluation grid

    alpha and beta hold ('in' | 'out', j, i, k) and ('in' | 'out', j) with
    0-based indices; fibers pairs each outer input slot (j, i, k) with the
    inner output block it is identified with.
    """
    alpha: Tuple[Tuple[Tuple[Tuple, ...], ...], ...]
    beta: Tuple[Tuple, ...]
    fibers: Tuple[Tuple[Tuple[int, int, int], int], ...]


def glue_index(shape: Shape, d: Descriptor) -> GlueIndex:
    """Where each slot of the glued grid comes from"""
    check_desc(shape, d)
    alpha: List[List[List[Tuple]]] = []
    if isinstance(d, Type1):
        J, I = d.j - 1, d.i - 1
        for j, block in enumerate(shape.n):
            rows = []
            for i, count in enumerate(block):
                col = []
                for k in range(1, count + 1):
                    if (j, i) != (J, I) or k <= d.s:
                        col.append(('in', j, i, k - 1))
                    elif k <= d.s + d.t:
                        col.append(('out', 0, 0, k - d.s - 1))
                    else:
                        col.append(('in', j, i, k - d.t))
                rows.append(tuple(col))
            alpha.append(rows)
        beta = tuple(('in', j) for j in range(shape.a))
        fibers = (((J, I, d.s), 0),)
    elif isinstance(d, Type2):
        offsets = _offsets([len(parts) for parts in d.parts])
        fiber_list = []
        for j, block in enumerate(shape.n):
            rows = []
            for i, count in enumerate(block):
                if i < d.s:
                    rows.append(tuple(('in', j, i, k) for k in range(count)))
                elif i < d.s + d.t:
                    c = i - d.s
                    rows.append(tuple(('out', offsets[j] + jj, c, k)
                                      for jj, part in enumerate(d.parts[j]) for k in range(part[c])))
                else:
                    rows.append(tuple(('in', j, i - d.t + 1, k) for k in range(count)))
            alpha.append(rows)
            fiber_list.extend(((j, d.s, k), offsets[j] + k) for k in range(len(d.parts[j])))
        beta = tuple(('in', j) for j in range(shape.a))
        fibers = tuple(fiber_list)
    else:
        J, b = d.j - 1, len(d.parts)
        for j, block in enumerate(shape.n):
            if j == J:
                alpha.append([tuple(('out', J + jj, i, k) for jj, part in enumerate(d.parts)
                                    for k in range(part[i])) for i in range(shape.r)])
            else:
                shift = j if j < J else j + b - 1
                alpha.append([tuple(('out', shift, i, k) for k in range(count))
                              for i, count in enumerate(block)])
        beta = tuple(('out', j) if j < J else ('in', 0) if j == J else ('out', j + b - 1)
                     for j in range(shape.a))
        fibers = tuple(((0, 0, ell), J + ell) for ell in range(b))
    return GlueIndex(tuple(tuple(rows) for rows in alpha), beta, fibers)


def _offsets(counts: Sequence[int]) -> List[int]:
    offsets, total = [], 0
    for count in counts:
        offsets.append(total)
        total += count
    return offsets


def _lookup(ev_in: EvalGrid, ev_out: EvalGrid, source: Tuple) -> Any:
    grid = ev_in if source[0] == 'in' else ev_out
    if len(source) == 2:
        return grid.beta[source[1]]
    return grid.alpha[source[1]][source[2]][source[3]]


def fiber_condition(d: Descriptor, ev_in: EvalGrid, ev_out: EvalGrid, index: GlueIndex) -> Optional[Tuple[str, Any, Any]]:
    """First violated identification as (slot, outer value, inner value)"""
    for (j, i, k), jj in index.fibers:
        left, right = ev_in.alpha[j][i][k], ev_out.beta[jj]
        if left != right:
            return f"alpha{(i + 1, j + 1, k + 1)}~beta{jj + 1}", left, right
    return None


def glue_evals(d: Descriptor, ev_in: EvalGrid, ev_out: EvalGrid, shape: Optional[Shape] = None) -> EvalGrid:
    """Evaluation grid of the glued point

    Raises:
        FiberMismatchError: If an identified pair of slots disagrees
    """
    if shape is None:
        shape = glued_shape(d, ev_in.shape, ev_out.shape)
    index = glue_index(shape, d)
    in_shape, out_shape = desc_shapes(shape, d)
    if ev_in.shape != in_shape or ev_out.shape != out_shape:
        raise ShapeError(f"evaluation grids do not have the shapes of {d}")
    broken = fiber_condition(d, ev_in, ev_out, index)
    if broken is not None:
        raise FiberMismatchError(*broken)
    alpha = tuple(tuple(tuple(_lookup(ev_in, ev_out, src) for src in col) for col in block)
                  for block in index.alpha)
    beta = tuple(_lookup(ev_in, ev_out, src) for src in index.beta)
    return EvalGrid(alpha, beta)


# Associativity of chains of descriptors

ChainStep = Tuple[int, Descriptor]


def run_chain(shape: Shape, chain: Sequence[ChainStep]) -> List[Tuple]:
    """Apply descriptors to factors and describe the result as sorted facts

    Each step (f, d) replaces factor f by its outer and inner collections.
    Facts record where every original slot ends up and which output slot
    feeds which input slot.
    """
    start = symbolic_collection(shape)
    alpha = [[[('A', i + 1, j + 1, k + 1) for k in range(count)] for i, count in enumerate(block)]
             for j, block in enumerate(shape.n)]
    beta = [('B', j + 1) for j in range(shape.a)]
    factors = [(start, EvalGrid(alpha, beta))]
    links = 0
    for position, d in chain:
        collection, labels = factors[position]
        sub_shape = collection.shape
        outer, inner = desc_collections(collection, d)
        index = glue_index(sub_shape, d)
        in_shape, out_shape = outer.shape, inner.shape
        in_alpha = [[[None] * count for count in block] for block in in_shape.n]
        out_alpha = [[[None] * count for count in block] for block in out_shape.n]
        in_beta = [None] * in_shape.a
        out_beta = [None] * out_shape.a
        for j, block in enumerate(index.alpha):
            for i, col in enumerate(block):
                for k, src in enumerate(col):
                    target = in_alpha if src[0] == 'in' else out_alpha
                    target[src[1]][src[2]][src[3]] = labels.alpha[j][i][k]
        for j, src in enumerate(index.beta):
            (in_beta if src[0] == 'in' else out_beta)[src[1]] = labels.beta[j]
        for (j, i, k), jj in index.fibers:
            links += 1
            in_alpha[j][i][k] = ('link', links)
            out_beta[jj] = ('link', links)
        factors[position:position + 1] = [(outer, EvalGrid(in_alpha, in_beta)),
                                          (inner, EvalGrid(out_alpha, out_beta))]
    return _facts(factors)


def _facts(factors) -> List[Tuple]:
    facts = []
    outputs: Dict[Tuple, Tuple] = {}
    inputs: Dict[Tuple, Tuple] = {}
    for collection, labels in factors:
        key = format_collection(collection)
        facts.append(('factor', key))
        for j, block in enumerate(labels.alpha):
            for i, col in enumerate(block):
                for k, label in enumerate(col):
                    if label[0] == 'link':
                        inputs[label] = (key, j, i, k)
                    else:
                        facts.append(('in', label, key, j, i, k))
        for j, label in enumerate(labels.beta):
            if label[0] == 'link':
                outputs[label] = (key, j)
            else:
                facts.append(('out', label, key, j))
    for link, source in outputs.items():
        facts.append(('link', source, inputs[link]))
    return sorted(facts, key=repr)


def assoc_shape_commute(shape: Shape, chain1: Sequence[ChainStep], chain2: Sequence[ChainStep]) -> bool:
    """Two chains of decompositions produce the same factors and wiring"""
    try:
        return run_chain(shape, chain1) == run_chain(shape, chain2)
    except (ShapeError, CompositionError) as e:
        logger.warning("chain could not be applied: %s", e)
        return False
