"""Planar rooted trees and the strata of the associahedra K_r"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

from .errors import ShapeError

logger = logging.getLogger(__name__)

# Leaf range (lo, hi) of a vertex, 1-based and inclusive
Span = Tuple[int, int]


@dataclass(frozen=True)
class PlanarTree:
    """Planar rooted tree; a vertex without children is a leaf"""
    children: Tuple['PlanarTree', ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def leaves(self) -> int:
        if self.is_leaf:
            return 1
        return sum(child.leaves for child in self.children)

    @property
    def internal(self) -> int:
        """Number of internal vertices, the root included"""
        if self.is_leaf:
            return 0
        return 1 + sum(child.internal for child in self.children)

    def is_stable(self) -> bool:
        """Every internal vertex has at least two children"""
        if self.is_leaf:
            return True
        return len(self.children) >= 2 and all(c.is_stable() for c in self.children)

    def child_spans(self, lo: int = 1) -> List[Span]:
        """Leaf ranges of the children of the root"""
        spans = []
        for child in self.children:
            spans.append((lo, lo + child.leaves - 1))
            lo += child.leaves
        return spans

    def vertices(self, lo: int = 1) -> Iterator[Tuple[Span, 'PlanarTree']]:
        """Preorder traversal yielding (leaf range, subtree)"""
        yield (lo, lo + self.leaves - 1), self
        for span, child in zip(self.child_spans(lo), self.children):
            yield from child.vertices(span[0])

    def internal_vertices(self) -> List[Tuple[Span, 'PlanarTree']]:
        return [(span, sub) for span, sub in self.vertices() if not sub.is_leaf]

    def subtree(self, span: Span) -> 'PlanarTree':
        """The subtree whose leaves are exactly the given range"""
        for vertex_span, sub in self.vertices():
            if vertex_span == span:
                return sub
        raise ShapeError(f"no vertex with leaf range {span} in {self}")

    def __str__(self) -> str:
        return format_tree(self)


LEAF = PlanarTree()


def corolla(r: int) -> PlanarTree:
    """The top stratum of K_r"""
    if r < 1:
        raise ShapeError(f"a tree needs at least one leaf, got r={r}")
    if r == 1:
        return LEAF
    return PlanarTree(tuple(LEAF for _ in range(r)))


def k_dim(tree: PlanarTree) -> int:
    """Dimension of the K_r stratum labelled by the tree"""
    return tree.leaves - 1 - tree.internal


def format_tree(tree: PlanarTree) -> str:
    """Text form: "x" for a leaf, "(t1,...,tk)" otherwise"""
    if tree.is_leaf:
        return "x"
    return "(" + ",".join(format_tree(child) for child in tree.children) + ")"


def parse_tree(text: str) -> PlanarTree:
    """Parse the text form produced by format_tree"""
    text = text.replace(" ", "")
    tree, pos = _parse_tree_at(text, 0)
    if pos != len(text):
        raise ValueError(f"trailing text in tree {text!r}")
    return tree


def _parse_tree_at(text: str, pos: int) -> Tuple[PlanarTree, int]:
    if text.startswith("x", pos):
        return LEAF, pos + 1
    if not text.startswith("(", pos):
        raise ValueError(f"malformed tree at {pos} in {text!r}")
    pos += 1
    children = []
    while True:
        child, pos = _parse_tree_at(text, pos)
        children.append(child)
        if text.startswith(",", pos):
            pos += 1
        elif text.startswith(")", pos):
            return PlanarTree(tuple(children)), pos + 1
        else:
            raise ValueError(f"malformed tree at {pos} in {text!r}")


def compositions(total: int, min_parts: int = 1) -> Iterator[Tuple[int, ...]]:
    """Ordered compositions of total into positive parts"""
    if total == 0:
        if min_parts <= 0:
            yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first, max(min_parts - 1, 0)):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _trees(r: int) -> Tuple[PlanarTree, ...]:
    if r == 1:
        return (LEAF,)
    found = []
    for parts in compositions(r, min_parts=2):
        options = [_trees(part) for part in parts]
        for combo in _product(options):
            found.append(PlanarTree(combo))
    return tuple(found)


def _product(options) -> Iterator[tuple]:
    if not options:
        yield ()
        return
    for head in options[0]:
        for tail in _product(options[1:]):
            yield (head,) + tail


def enum_k(r: int) -> List[PlanarTree]:
    """All strata of K_r, top stratum first, then by dimension and text"""
    if r < 1:
        raise ShapeError(f"K_r needs r >= 1, got {r}")
    strata = sorted(_trees(r), key=lambda t: (-k_dim(t), format_tree(t)))
    logger.debug("K_%d has %d strata", r, len(strata))
    return strata


def f_vector(dims: List[int]) -> Tuple[int, ...]:
    """Number of strata per dimension, from dimension 0 upwards"""
    if not dims:
        return ()
    counts = [0] * (max(dims) + 1)
    for d in dims:
        counts[d] += 1
    return tuple(counts)


def euler_char(dims) -> int:
    """Alternating count of strata by dimension"""
    return sum((-1) ** d for d in dims)


def graft_k(outer: PlanarTree, inner: PlanarTree, slot: int) -> PlanarTree:
    """Graft inner onto leaf number slot (1-based) of outer

    Args:
        outer (PlanarTree): Tree with r - t + 1 leaves
        inner (PlanarTree): Tree with t leaves
        slot (int): Leaf of outer that inner replaces

    Returns:
        PlanarTree: Tree with r leaves

    Raises:
        ShapeError: If slot is not a leaf of outer
    """
    if not 1 <= slot <= outer.leaves:
        raise ShapeError(f"slot {slot} out of range for a tree with {outer.leaves} leaves")
    return _graft(outer, inner, slot)


def _graft(tree: PlanarTree, inner: PlanarTree, slot: int) -> PlanarTree:
    if tree.is_leaf:
        return inner
    children = []
    for child in tree.children:
        if 1 <= slot <= child.leaves:
            children.append(_graft(child, inner, slot))
        else:
            children.append(child)
        slot -= child.leaves
    return PlanarTree(tuple(children))


def contract_edge(tree: PlanarTree, span: Span) -> PlanarTree:
    """Merge the internal non-root vertex with the given range into its parent"""
    if tree.is_leaf:
        raise ShapeError(f"no internal vertex with range {span}")
    children: List[PlanarTree] = []
    hit = False
    for child_span, child in zip(tree.child_spans(), tree.children):
        if child_span == span and not child.is_leaf:
            children.extend(child.children)
            hit = True
        elif child_span[0] <= span[0] and span[1] <= child_span[1] and not child.is_leaf:
            children.append(_contract_at(child, span, child_span[0]))
            hit = True
        else:
            children.append(child)
    if not hit:
        raise ShapeError(f"no internal non-root vertex with range {span}")
    return PlanarTree(tuple(children))


def _contract_at(tree: PlanarTree, span: Span, lo: int) -> PlanarTree:
    shifted = (span[0] - lo + 1, span[1] - lo + 1)
    return contract_edge(tree, shifted)


def k_poset(r: int) -> Dict[str, List[str]]:
    """Covering relations of the face poset of K_r

    Returns:
        dict: Text form of each stratum mapped to the strata of one higher
        dimension whose closure contains it
    """
    covers: Dict[str, List[str]] = {}
    for tree in enum_k(r):
        above = set()
        for span, sub in tree.internal_vertices():
            if span != (1, r):
                above.add(format_tree(contract_edge(tree, span)))
        covers[format_tree(tree)] = sorted(above)
    return covers


def collapse(tree: PlanarTree, span: Span) -> PlanarTree:
    """Replace the subtree with the given leaf range by a single leaf"""
    if tree.is_leaf:
        raise ShapeError(f"no vertex with range {span}")
    children: List[PlanarTree] = []
    hit = False
    for child_span, child in zip(tree.child_spans(), tree.children):
        if child_span == span:
            children.append(LEAF)
            hit = True
        elif child_span[0] <= span[0] and span[1] <= child_span[1] and not child.is_leaf:
            lo = child_span[0]
            children.append(collapse(child, (span[0] - lo + 1, span[1] - lo + 1)))
            hit = True
        else:
            children.append(child)
    if not hit:
        raise ShapeError(f"no non-root vertex with range {span}")
    return PlanarTree(tuple(children))
