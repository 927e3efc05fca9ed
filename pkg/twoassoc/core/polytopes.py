"""Strata of 2-associahedra and of their fiber products over K_r

A stratum of W_n is a tree-pair: a seam tree (a stratum of K_r) together with
a bubble tree whose component vertices sit over seam-tree vertices. The bubble
tree is stored position-implicitly: the root component lies over the root of
the seam tree, a single-seam component lies over the vertex of the seam that
holds it, and the seams of a multi-seam component lie over the children of
its vertex. Marked points only occur on seams over leaves.

Text forms: "p" is a marked point, "S[c1,c2]" a single-seam component and
"B<c1,c2|c3>" a multi-seam component with one comma list per seam. A coppice
is written "tree ; block1 ; block2".
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import ShapeError
from .shapes import (Descriptor, Shape, Type1, Type2, Type3, desc_shapes, glued_shape,
                     vector_compositions)
from .trees import (LEAF, PlanarTree, Span, contract_edge, corolla, enum_k,
                    format_tree, graft_k, parse_tree)

logger = logging.getLogger(__name__)


class ComponentKind(Enum):
    """Kind of a component vertex of a bubble tree"""
    SINGLE = "S"
    MULTI = "B"


@dataclass(frozen=True)
class MarkedPoint:
    """A marked point on a seam over a leaf"""

    def __str__(self) -> str:
        return "p"


MARK = MarkedPoint()


@dataclass(frozen=True)
class Component:
    """Component vertex with its seams, each an ordered tuple of children"""
    kind: ComponentKind
    seams: Tuple[Tuple[Union['Component', MarkedPoint], ...], ...]

    @property
    def special_points(self) -> int:
        return sum(len(seam) for seam in self.seams)

    @property
    def mass(self) -> int:
        total = 0
        for seam in self.seams:
            for node in seam:
                total += 1 if node is MARK or isinstance(node, MarkedPoint) else node.mass
        return total

    def __str__(self) -> str:
        return format_component(self)


Node = Union[Component, MarkedPoint]


def single(children: Sequence[Node]) -> Component:
    return Component(ComponentKind.SINGLE, (tuple(children),))


def multi(seams: Sequence[Sequence[Node]]) -> Component:
    return Component(ComponentKind.MULTI, tuple(tuple(seam) for seam in seams))


def ghost(tree: PlanarTree) -> Component:
    """Pointless multi-seam component over the given vertex"""
    return multi([() for _ in tree.children])


def is_mark(node: Node) -> bool:
    return isinstance(node, MarkedPoint)


@dataclass(frozen=True)
class TreePair:
    """A stratum of W_n: seam tree plus bubble tree"""
    seam: PlanarTree
    bubble: Component

    def __str__(self) -> str:
        return f"{format_tree(self.seam)} ; {format_component(self.bubble)}"


@dataclass(frozen=True)
class Coppice:
    """Tuple of tree-pairs sharing one seam tree"""
    seam: PlanarTree
    bubbles: Tuple[Component, ...]

    @property
    def pairs(self) -> Tuple[TreePair, ...]:
        return tuple(TreePair(self.seam, bubble) for bubble in self.bubbles)

    @property
    def shape(self) -> Shape:
        r = self.seam.leaves
        return Shape(r, len(self.bubbles),
                     tuple(block_counts(self.seam, bubble) for bubble in self.bubbles))

    def __str__(self) -> str:
        return format_coppice(self)


def as_coppice(stratum: Union[TreePair, Coppice]) -> Coppice:
    if isinstance(stratum, TreePair):
        return Coppice(stratum.seam, (stratum.bubble,))
    return stratum


# Text forms

def format_node(node: Node) -> str:
    if is_mark(node):
        return "p"
    return format_component(node)


def format_component(comp: Component) -> str:
    if comp.kind is ComponentKind.SINGLE:
        return "S[" + ",".join(format_node(n) for n in comp.seams[0]) + "]"
    return "B<" + "|".join(",".join(format_node(n) for n in seam) for seam in comp.seams) + ">"


def format_coppice(c: Union[TreePair, Coppice]) -> str:
    c = as_coppice(c)
    return " ; ".join([format_tree(c.seam)] + [format_component(b) for b in c.bubbles])


def parse_coppice(text: str) -> Coppice:
    """Parse "tree ; block1 ; ..." and check it against the seam tree"""
    parts = [part.strip() for part in text.split(';')]
    if len(parts) < 2:
        raise ValueError(f"a coppice needs a seam tree and at least one block: {text!r}")
    seam = parse_tree(parts[0])
    bubbles = []
    for part in parts[1:]:
        comp, pos = _parse_component_at(part.replace(" ", ""), 0)
        if pos != len(part.replace(" ", "")):
            raise ValueError(f"trailing text in block {part!r}")
        bubbles.append(comp)
    c = Coppice(seam, tuple(bubbles))
    for bubble in c.bubbles:
        check_component(bubble, (1, seam.leaves), seam)
    return c


def _parse_node_at(text: str, pos: int) -> Tuple[Node, int]:
    if text.startswith("p", pos):
        return MARK, pos + 1
    return _parse_component_at(text, pos)


def _parse_list_at(text: str, pos: int, closers: str) -> Tuple[List[Node], int]:
    nodes: List[Node] = []
    if pos < len(text) and text[pos] in closers:
        return nodes, pos
    while True:
        node, pos = _parse_node_at(text, pos)
        nodes.append(node)
        if text.startswith(",", pos):
            pos += 1
            continue
        return nodes, pos


def _parse_component_at(text: str, pos: int) -> Tuple[Component, int]:
    if text.startswith("S[", pos):
        nodes, pos = _parse_list_at(text, pos + 2, "]")
        if not text.startswith("]", pos):
            raise ValueError(f"expected ']' at {pos} in {text!r}")
        return single(nodes), pos + 1
    if text.startswith("B<", pos):
        pos += 2
        seams = []
        while True:
            nodes, pos = _parse_list_at(text, pos, "|>")
            seams.append(nodes)
            if text.startswith("|", pos):
                pos += 1
                continue
            if text.startswith(">", pos):
                return multi(seams), pos + 1
            raise ValueError(f"expected '|' or '>' at {pos} in {text!r}")
    raise ValueError(f"malformed component at {pos} in {text!r}")


# Traversal helpers

def seam_slots(comp: Component, span: Span, sub: PlanarTree) -> List[Tuple[Tuple[Node, ...], Span, PlanarTree]]:
    """Seams of a component with the seam-tree vertex each one lies over"""
    if comp.kind is ComponentKind.SINGLE:
        return [(comp.seams[0], span, sub)]
    return list(zip(comp.seams, sub.child_spans(span[0]), sub.children))


def check_component(comp: Component, span: Span, sub: PlanarTree) -> None:
    """Check that a component fits over the given seam-tree vertex

    Raises:
        ShapeError: On a seam count mismatch or a marked point off a leaf
    """
    if comp.kind is ComponentKind.SINGLE:
        if len(comp.seams) != 1:
            raise ShapeError("a single-seam component has exactly one seam")
    else:
        if sub.is_leaf:
            raise ShapeError(f"multi-seam component over leaf {span[0]}")
        if len(comp.seams) != len(sub.children):
            raise ShapeError(f"component over {span} needs {len(sub.children)} seams")
    for seam, seam_span, seam_sub in seam_slots(comp, span, sub):
        for node in seam:
            if is_mark(node):
                if not seam_sub.is_leaf:
                    raise ShapeError(f"marked point on a seam over internal vertex {seam_span}")
            else:
                check_component(node, seam_span, seam_sub)


def block_counts(seam: PlanarTree, bubble: Component) -> Tuple[int, ...]:
    """Number of marked points over each leaf"""
    counts = [0] * seam.leaves

    def visit(comp: Component, span: Span, sub: PlanarTree) -> None:
        for nodes, seam_span, seam_sub in seam_slots(comp, span, sub):
            for node in nodes:
                if is_mark(node):
                    counts[seam_span[0] - 1] += 1
                else:
                    visit(node, seam_span, seam_sub)

    visit(bubble, (1, seam.leaves), seam)
    return tuple(counts)


def map_points(comp: Component, span: Span, sub: PlanarTree,
               on_point: Callable[[int], Node]) -> Component:
    """Rebuild a component, replacing each marked point in traversal order

    Args:
        comp (Component): Component over the vertex with range span
        on_point (callable): Receives the leaf index of a marked point and
            returns the node that takes its place

    Returns:
        Component: The rebuilt component
    """
    seams = []
    for nodes, seam_span, seam_sub in seam_slots(comp, span, sub):
        rebuilt: List[Node] = []
        for node in nodes:
            if is_mark(node):
                rebuilt.append(on_point(seam_span[0]))
            else:
                rebuilt.append(map_points(node, seam_span, seam_sub, on_point))
        seams.append(tuple(rebuilt))
    return Component(comp.kind, tuple(seams))


def components_over(comp: Component, span: Span, sub: PlanarTree) -> Iterator[Tuple[Component, Span, PlanarTree]]:
    """Preorder traversal of components with the vertex each one lies over"""
    yield comp, span, sub
    for nodes, seam_span, seam_sub in seam_slots(comp, span, sub):
        for node in nodes:
            if not is_mark(node):
                yield from components_over(node, seam_span, seam_sub)


# Enumeration

@lru_cache(maxsize=None)
def _leaf_sequences(m: int, min_len: int = 0) -> Tuple[Tuple[Node, ...], ...]:
    """Sequences of at least min_len marked points and single-seam bubbles carrying m points"""
    if m == 0:
        return ((),) if min_len <= 0 else ()
    found = []
    for first in range(1, m + 1):
        if min_len >= 2 and first == m:
            continue
        heads: Sequence[Node] = (MARK,) if first == 1 else _leaf_singles(first)
        for head in heads:
            for tail in _leaf_sequences(m - first, max(min_len - 1, 0)):
                found.append((head,) + tail)
    return tuple(found)


@lru_cache(maxsize=None)
def _leaf_singles(m: int) -> Tuple[Component, ...]:
    # at least two children, each carrying fewer than m points
    return tuple(single(seq) for seq in _leaf_sequences(m, 2))


def _split(tree: PlanarTree, m: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    parts, lo = [], 0
    for child in tree.children:
        parts.append(m[lo:lo + child.leaves])
        lo += child.leaves
    return parts


@lru_cache(maxsize=None)
def _seam_options(tree: PlanarTree, m: Tuple[int, ...]) -> Tuple[Tuple[Node, ...], ...]:
    if tree.is_leaf:
        return _leaf_sequences(m[0])
    return _internal_sequences(tree, m)


@lru_cache(maxsize=None)
def _internal_sequences(tree: PlanarTree, m: Tuple[int, ...], min_len: int = 0) -> Tuple[Tuple[Node, ...], ...]:
    """Sequences of stable components over an internal vertex"""
    found = []
    for parts in vector_compositions(m, min_parts=min_len):
        options = [_comps_over(tree, part) for part in parts]
        for combo in _product(options):
            found.append(combo)
    return tuple(found)


@lru_cache(maxsize=None)
def _comps_over(tree: PlanarTree, m: Tuple[int, ...]) -> Tuple[Component, ...]:
    """Stable non-root components over a vertex carrying the counts m"""
    if not any(m):
        return ()
    if tree.is_leaf:
        return _leaf_singles(m[0])
    found: List[Component] = []
    per_seam = [_seam_options(child, part) for child, part in zip(tree.children, _split(tree, m))]
    for seams in _product(per_seam):
        found.append(multi(seams))
    for seq in _internal_sequences(tree, m, 2):
        found.append(single(seq))
    return tuple(found)


def _product(options) -> Iterator[tuple]:
    if not options:
        yield ()
        return
    for head in options[0]:
        for tail in _product(options[1:]):
            yield (head,) + tail


def root_components(tree: PlanarTree, n: Tuple[int, ...]) -> List[Component]:
    """All bubble trees of W_n over the given seam tree"""
    if tree.is_leaf:
        seqs = _leaf_sequences(n[0])
        if n[0] < 2:
            return [single(seq) for seq in seqs]
        return [single(seq) for seq in seqs if len(seq) >= 2]
    if not any(n):
        return [ghost(tree)]
    return list(_comps_over(tree, tuple(n)))


def _sort_key(c: Coppice) -> Tuple[int, str]:
    return (-coppice_dim(c), format_coppice(c))


def enum_w(n: Sequence[int], stable_only: bool = True) -> List[TreePair]:
    """All strata of W_n, top stratum first

    Exceptional shapes with a negative parameter count yield their single
    unstable point in either mode.
    """
    n = tuple(n)
    if not n or any(x < 0 for x in n):
        raise ShapeError(f"invalid block {n}")
    found = []
    for tree in enum_k(len(n)):
        for bubble in root_components(tree, n):
            found.append(Coppice(tree, (bubble,)))
    if stable_only and not is_exceptional(len(n), n):
        found = [c for c in found if is_stable(c)]
    found.sort(key=_sort_key)
    logger.debug("W_%s has %d strata", n, len(found))
    return [c.pairs[0] for c in found]


def enum_fiber(shape: Shape) -> List[Coppice]:
    """All strata of the fiber product of the W_{n^j} over K_r"""
    return list(_fiber_strata(shape))


@lru_cache(maxsize=None)
def _fiber_strata(shape: Shape) -> Tuple[Coppice, ...]:
    found = []
    for tree in enum_k(shape.r):
        options = [root_components(tree, block) for block in shape.n]
        for bubbles in _product(options):
            found.append(Coppice(tree, bubbles))
    found.sort(key=_sort_key)
    logger.debug("fiber product %s has %d strata", shape, len(found))
    return tuple(found)


def top_stratum(shape: Shape) -> Coppice:
    """The interior stratum of the fiber product"""
    tree = corolla(shape.r)
    if shape.r == 1:
        return Coppice(tree, tuple(single((MARK,) * block[0]) for block in shape.n))
    return Coppice(tree, tuple(multi([(MARK,) * count for count in block]) for block in shape.n))


# Dimension and stability

def _component_dim(comp: Component) -> int:
    own = comp.special_points - (2 if comp.kind is ComponentKind.SINGLE else 1)
    total = max(own, 0)
    for seam in comp.seams:
        for node in seam:
            if not is_mark(node):
                total += _component_dim(node)
    return total


@lru_cache(maxsize=None)
def coppice_dim(c: Union[TreePair, Coppice]) -> int:
    """Dimension of a stratum of the fiber product"""
    c = as_coppice(c)
    seam_part = sum(len(sub.children) - 2 for _, sub in c.seam.internal_vertices())
    return seam_part + sum(_component_dim(bubble) for bubble in c.bubbles)


def w_dim(tp: Union[TreePair, Coppice]) -> int:
    """Dimension of a stratum of W_n"""
    return coppice_dim(tp)


@lru_cache(maxsize=None)
def top_dim(shape: Shape) -> int:
    return coppice_dim(top_stratum(shape))


def codim(c: Coppice) -> int:
    return top_dim(c.shape) - coppice_dim(c)


def is_exceptional(r: int, n: Sequence[int]) -> bool:
    """The shapes (1,(0)), (1,(1)) and (2,(0,0))"""
    return (r == 1 and n[0] < 2) or (r == 2 and not any(n))


def is_block_stable(tree: PlanarTree, bubble: Component) -> bool:
    r = tree.leaves
    n = block_counts(tree, bubble)
    if is_exceptional(r, n):
        return False
    for comp, span, _ in components_over(bubble, (1, r), tree):
        is_root = comp is bubble
        if comp.kind is ComponentKind.SINGLE:
            if comp.special_points < 2:
                return False
        elif comp.special_points < 1 and not (is_root and not any(n)):
            return False
    return True


def is_stable(c: Union[TreePair, Coppice]) -> bool:
    """Every block satisfies the stability predicate"""
    c = as_coppice(c)
    return c.seam.is_stable() and all(is_block_stable(c.seam, b) for b in c.bubbles)


def is_shape_stable(shape: Shape) -> bool:
    return all(not is_exceptional(shape.r, block) for block in shape.n)


def forgetful(tp: Union[TreePair, Coppice]) -> PlanarTree:
    """Projection to the seam tree"""
    return tp.seam


# Grafting

def _check_inputs(desc: Descriptor, shape: Shape, outer: Coppice, inner: Coppice) -> None:
    in_shape, out_shape = desc_shapes(shape, desc)
    if outer.shape != in_shape:
        raise ShapeError(f"outer stratum has shape {outer.shape}, {desc} needs {in_shape}")
    if inner.shape != out_shape:
        raise ShapeError(f"inner stratum has shape {inner.shape}, {desc} needs {out_shape}")


def gamma_graft(desc: Descriptor, outer: Coppice, inner: Coppice) -> Coppice:
    """Glue an outer and an inner stratum along a boundary descriptor

    The result lives in the unstable enlargement: single-seam components
    with one child and pointless components are kept as they are.

    Args:
        desc (Descriptor): Boundary decomposition datum
        outer (Coppice): Stratum for the in-collection
        inner (Coppice): Stratum for the out-collection

    Returns:
        Coppice: The glued stratum

    Raises:
        ShapeError: If the strata do not have the descriptor's shapes
    """
    shape = glued_shape(desc, outer.shape, inner.shape)
    _check_inputs(desc, shape, outer, inner)
    if isinstance(desc, Type1):
        return _graft_type1(desc, outer, inner)
    if isinstance(desc, Type2):
        return _graft_type2(desc, outer, inner)
    return _graft_type3(desc, outer, inner)


def _graft_type1(desc: Type1, outer: Coppice, inner: Coppice) -> Coppice:
    seen = [0]

    def on_point(leaf: int) -> Node:
        if leaf != desc.i:
            return MARK
        index = seen[0]
        seen[0] += 1
        return inner.bubbles[0] if index == desc.s else MARK

    tree = outer.seam
    bubbles = list(outer.bubbles)
    bubbles[desc.j - 1] = map_points(bubbles[desc.j - 1], (1, tree.leaves), tree, on_point)
    return Coppice(tree, tuple(bubbles))


def _graft_type2(desc: Type2, outer: Coppice, inner: Coppice) -> Coppice:
    tree = outer.seam
    slot = desc.s + 1
    bubbles = []
    offset = 0
    for j, bubble in enumerate(outer.bubbles):
        roots = inner.bubbles[offset:offset + len(desc.parts[j])]
        offset += len(desc.parts[j])
        queue = list(roots)

        def on_point(leaf: int, queue=queue) -> Node:
            if leaf != slot:
                return MARK
            return queue.pop(0)

        bubbles.append(map_points(bubble, (1, tree.leaves), tree, on_point))
    return Coppice(graft_k(tree, inner.seam, slot), tuple(bubbles))


def _graft_type3(desc: Type3, outer: Coppice, inner: Coppice) -> Coppice:
    b = len(desc.parts)
    queue = list(inner.bubbles[desc.j - 1:desc.j - 1 + b])
    merged = map_points(outer.bubbles[0], (1, 1), LEAF, lambda leaf: queue.pop(0))
    bubbles = inner.bubbles[:desc.j - 1] + (merged,) + inner.bubbles[desc.j - 1 + b:]
    return Coppice(inner.seam, bubbles)


def stabilize(c: Coppice) -> Coppice:
    """Forget pointless bubbles and single-seam bubbles with one child

    Returns:
        Coppice: The stable stratum the unstable one represents
    """
    tree = c.seam
    bubbles = []
    for bubble in c.bubbles:
        current = bubble
        while True:
            reduced = _stabilize_root(current, tree)
            if reduced == current:
                break
            current = reduced
        bubbles.append(current)
    return Coppice(tree, tuple(bubbles))


def _stabilize_root(root: Component, tree: PlanarTree) -> Component:
    if tree.leaves >= 2 and root.mass == 0:
        return ghost(tree)
    root = _stabilize_children(root)
    if root.kind is ComponentKind.SINGLE and len(root.seams[0]) == 1:
        child = root.seams[0][0]
        if not is_mark(child):
            return child
    return root


def _stabilize_children(comp: Component) -> Component:
    seams = []
    for seam in comp.seams:
        kept: List[Node] = []
        for node in seam:
            if is_mark(node):
                kept.append(node)
                continue
            if node.mass == 0:
                continue
            node = _stabilize_children(node)
            if node.kind is ComponentKind.SINGLE and len(node.seams[0]) == 1:
                kept.append(node.seams[0][0])
            else:
                kept.append(node)
        seams.append(tuple(kept))
    return Component(comp.kind, tuple(seams))


def ghost_lift(c: Coppice) -> Coppice:
    """Canonical unstable representative of a stable stratum

    Every empty seam over an internal seam-tree vertex receives one pointless
    multi-seam bubble, recursively.
    """
    tree = c.seam
    return Coppice(tree, tuple(_lift(b, (1, tree.leaves), tree) for b in c.bubbles))


def _lift(comp: Component, span: Span, sub: PlanarTree) -> Component:
    seams = []
    for nodes, seam_span, seam_sub in seam_slots(comp, span, sub):
        if not nodes and not seam_sub.is_leaf:
            seams.append((_lift(ghost(seam_sub), seam_span, seam_sub),))
            continue
        seams.append(tuple(node if is_mark(node) else _lift(node, seam_span, seam_sub)
                           for node in nodes))
    return Component(comp.kind, tuple(seams))


# Boundary

def boundary_descriptors(shape: Shape) -> List[Descriptor]:
    """Descriptors whose images are the codimension-1 strata

    Type-1 collisions of at least two points, type-2 partial seam collisions
    with nonzero parts (a block with an all-zero segment takes a single zero
    part) and type-3 full collisions into at least two nonzero parts.
    """
    found: List[Descriptor] = []
    for j, block in enumerate(shape.n, start=1):
        for i, count in enumerate(block, start=1):
            for t in range(2, count + 1):
                for s in range(0, count - t + 1):
                    found.append(Type1(i, j, s, t))
    r = shape.r
    for t in range(2, r):
        for s in range(0, r - t + 1):
            options = []
            for block in shape.n:
                segment = block[s:s + t]
                if not any(segment):
                    options.append([(tuple(segment),)])
                else:
                    options.append(list(vector_compositions(segment, min_parts=1)))
            for parts in _product(options):
                found.append(Type2(s, t, tuple(parts)))
    if r >= 2:
        for j, block in enumerate(shape.n, start=1):
            for parts in vector_compositions(block, min_parts=2):
                found.append(Type3(j, tuple(parts)))
    return found


@lru_cache(maxsize=None)
def boundary_image(shape: Shape, desc: Descriptor) -> Coppice:
    """Stable stratum hit by a descriptor applied to two interior strata"""
    in_shape, out_shape = desc_shapes(shape, desc)
    return stabilize(gamma_graft(desc, top_stratum(in_shape), top_stratum(out_shape)))


def boundary_strata(shape: Shape) -> List[Tuple[Descriptor, Coppice]]:
    """Codimension-1 strata, each tagged with the descriptor producing it"""
    return list(_boundary_strata(shape))


@lru_cache(maxsize=None)
def _boundary_strata(shape: Shape) -> Tuple[Tuple[Descriptor, Coppice], ...]:
    if not is_shape_stable(shape):
        return ()
    found = []
    for desc in boundary_descriptors(shape):
        image = boundary_image(shape, desc)
        if codim(image) != 1:
            logger.debug("descriptor %s lands in codimension %d", desc, codim(image))
            continue
        found.append((desc, image))
    return tuple(found)


# Face posets

def smoothings(c: Coppice) -> List[Coppice]:
    """Strata one dimension up whose closure contains c"""
    return list(_smoothings(c))


@lru_cache(maxsize=None)
def _smoothings(c: Coppice) -> Tuple[Coppice, ...]:
    tree = c.seam
    r = tree.leaves
    found = set()
    for j, bubble in enumerate(c.bubbles):
        for smoothed in _smooth_block(bubble, (1, r), tree):
            found.add(Coppice(tree, c.bubbles[:j] + (smoothed,) + c.bubbles[j + 1:]))
    for span, _ in tree.internal_vertices():
        if span == (1, r):
            continue
        merged = []
        for bubble in c.bubbles:
            contracted = _contract_block(bubble, (1, r), tree, span)
            if contracted is None:
                break
            merged.append(contracted)
        else:
            found.add(Coppice(contract_edge(tree, span), tuple(merged)))
    dim = coppice_dim(c)
    return tuple(sorted((f for f in found if coppice_dim(f) == dim + 1), key=format_coppice))


def _smooth_block(comp: Component, span: Span, sub: PlanarTree) -> List[Component]:
    """Single smoothing moves inside one bubble tree"""
    found = []
    if comp.kind is ComponentKind.SINGLE and not sub.is_leaf:
        children = comp.seams[0]
        if children and all(not is_mark(n) and n.kind is ComponentKind.MULTI for n in children):
            seams = [tuple(node for child in children for node in child.seams[m])
                     for m in range(len(sub.children))]
            found.append(multi(seams))
    slots = seam_slots(comp, span, sub)
    for m, (nodes, seam_span, seam_sub) in enumerate(slots):
        for k, node in enumerate(nodes):
            if is_mark(node):
                continue
            replacements = []
            if node.kind is ComponentKind.SINGLE:
                replacements.append(nodes[:k] + node.seams[0] + nodes[k + 1:])
            for smoothed in _smooth_block(node, seam_span, seam_sub):
                replacements.append(nodes[:k] + (smoothed,) + nodes[k + 1:])
            for replacement in replacements:
                seams = list(comp.seams)
                seams[m] = replacement
                found.append(Component(comp.kind, tuple(seams)))
    return found


def _contract_block(comp: Component, span: Span, sub: PlanarTree, target: Span) -> Optional[Component]:
    seams = []
    for nodes, seam_span, seam_sub in seam_slots(comp, span, sub):
        if seam_span == target and comp.kind is ComponentKind.MULTI:
            if not nodes:
                seams.extend(() for _ in seam_sub.children)
                continue
            if len(nodes) == 1 and not is_mark(nodes[0]) and nodes[0].kind is ComponentKind.MULTI:
                inner = _contract_children(nodes[0], seam_span, seam_sub, target)
                if inner is None:
                    return None
                seams.extend(inner.seams)
                continue
            return None
        rebuilt = []
        for node in nodes:
            if is_mark(node):
                rebuilt.append(node)
                continue
            contracted = _contract_block(node, seam_span, seam_sub, target)
            if contracted is None:
                return None
            rebuilt.append(contracted)
        seams.append(tuple(rebuilt))
    return Component(comp.kind, tuple(seams))


def _contract_children(comp: Component, span: Span, sub: PlanarTree, target: Span) -> Optional[Component]:
    seams = []
    for nodes, seam_span, seam_sub in seam_slots(comp, span, sub):
        rebuilt = []
        for node in nodes:
            if is_mark(node):
                rebuilt.append(node)
                continue
            contracted = _contract_block(node, seam_span, seam_sub, target)
            if contracted is None:
                return None
            rebuilt.append(contracted)
        seams.append(tuple(rebuilt))
    return Component(comp.kind, tuple(seams))


def face_poset(shape: Shape) -> Dict[str, List[str]]:
    """Covering relations of the face poset of the fiber product

    Returns:
        dict: Text form of each stratum mapped to the strata covering it
    """
    strata = enum_fiber(shape)
    known = {format_coppice(c) for c in strata}
    covers = {}
    for c in strata:
        covers[format_coppice(c)] = [format_coppice(f) for f in smoothings(c)
                                     if format_coppice(f) in known]
    return covers


def w_as_k_iso(n: int) -> List[Tuple[TreePair, PlanarTree]]:
    """Dimension-preserving bijection between the strata of W_(n) and K_n

    For n <= 1 both sides are a single point, paired with the one-leaf tree.
    """
    if n < 0:
        raise ShapeError(f"negative point count {n}")
    pairs = []
    for tp in enum_w((n,), stable_only=False):
        pairs.append((tp, LEAF if n <= 1 else _single_to_tree(tp.bubble)))
    return pairs


def _single_to_tree(comp: Component) -> PlanarTree:
    return PlanarTree(tuple(LEAF if is_mark(node) else _single_to_tree(node)
                            for node in comp.seams[0]))
