"""Labelings of coppices, decomposition shapes and the associativity check

Seams are addressed by (block, path): the root component's seam m has path
(m,), and seam m' of the component at position k of seam path P has path
P + (k, m').
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterator, List, Tuple

from ..config import ASSOC_MAX_CODIM
from .errors import LabelingError, ShapeError
from .polytopes import (MARK, Component, ComponentKind, Coppice, block_counts, codim,
                        ghost_lift, is_mark, seam_slots, single, top_stratum)
from .shapes import (Collection, Descriptor, Shape, Type1, Type2, Type3,
                     desc_collections, format_collection, symbolic_collection)
from .trees import LEAF, PlanarTree, Span, collapse

logger = logging.getLogger(__name__)

SeamKey = Tuple[int, Tuple[int, ...]]


@dataclass
class Labeling:
    """Sequence of 1-morphisms on every seam of every bubble tree"""
    labels: Dict[SeamKey, Tuple[Any, ...]] = field(default_factory=dict)
    spans: Dict[SeamKey, Span] = field(default_factory=dict)

    def __getitem__(self, key: SeamKey) -> Tuple[Any, ...]:
        return self.labels[key]


def _label_block(collection: Collection, j: int, tree: PlanarTree, root: Component,
                 labeling: Labeling) -> None:
    counts = [0] * tree.leaves

    def label_seam(key: SeamKey, nodes, span: Span, sub: PlanarTree) -> None:
        lo, hi = span

        def current():
            return collection.composite(j, counts[lo - 1:hi], lo, hi)

        seq = [current()]
        for k, node in enumerate(nodes):
            if is_mark(node):
                counts[lo - 1] += 1
            else:
                visit(node, span, sub, key[1] + (k,))
            seq.append(current())
        labeling.labels[key] = tuple(seq)
        labeling.spans[key] = span

    def visit(comp: Component, span: Span, sub: PlanarTree, path: Tuple[int, ...]) -> None:
        for m, (nodes, seam_span, seam_sub) in enumerate(seam_slots(comp, span, sub)):
            label_seam((j, path + (m,)), nodes, seam_span, seam_sub)

    visit(root, (1, tree.leaves), tree, ())


def induced_labeling(collection: Collection, c: Coppice) -> Labeling:
    """Canonical labeling of a coppice by a collection of its shape

    The k-th label of a seam over the leaf range lo..hi composes, over those
    leaves, the grid entry indexed by the number of marked points on the leaf
    that precede the k-th gap.

    Raises:
        LabelingError: If the shapes differ or the labeling is inconsistent
    """
    if collection.shape != c.shape:
        raise LabelingError(f"collection of shape {collection.shape} cannot label {c.shape}")
    labeling = Labeling()
    for j, bubble in enumerate(c.bubbles, start=1):
        _label_block(collection, j, c.seam, bubble, labeling)
    verify_labeling(collection, c, labeling)
    return labeling


def verify_labeling(collection: Collection, c: Coppice, labeling: Labeling) -> None:
    """Check endpoint types, endpoint matching and the composition condition

    Raises:
        LabelingError: Naming the first violated condition
    """
    cat = collection.cat
    tree = c.seam
    for j, bubble in enumerate(c.bubbles, start=1):
        events: List[Tuple] = []
        _check_component(collection, labeling, j, bubble, (1, tree.leaves), tree, (), events)
        first, last = _component_ends(cat, labeling, j, bubble, ())
        if (first, last) != collection.ends[j - 1]:
            raise LabelingError(f"block {j}: root labels do not compose to the block's ends")
        _check_matching(labeling, j, events)
    for key, seq in labeling.labels.items():
        lo, hi = labeling.spans[key]
        for f in seq:
            if cat.source(f) != collection.objects[lo - 1] or cat.target(f) != collection.objects[hi]:
                raise LabelingError(f"seam {key}: label {cat.format_mor(f)} has the wrong endpoints")


def _component_ends(cat, labeling: Labeling, j: int, comp: Component, path: Tuple[int, ...]) -> Tuple[Any, Any]:
    firsts, lasts = [], []
    for m in range(len(comp.seams)):
        seq = labeling[(j, path + (m,))]
        firsts.append(seq[0])
        lasts.append(seq[-1])
    return _compose_all(cat, firsts), _compose_all(cat, lasts)


def _compose_all(cat, mors: List[Any]) -> Any:
    result = mors[0]
    for f in mors[1:]:
        result = cat.compose(result, f)
    return result


def _check_component(collection: Collection, labeling: Labeling, j: int, comp: Component,
                     span: Span, sub: PlanarTree, path: Tuple[int, ...], events: List[Tuple]) -> None:
    cat = collection.cat
    for m, (nodes, seam_span, seam_sub) in enumerate(seam_slots(comp, span, sub)):
        key = (j, path + (m,))
        if key not in labeling.labels:
            raise LabelingError(f"seam {key} has no labels")
        seq = labeling[key]
        if len(seq) != len(nodes) + 1:
            raise LabelingError(f"seam {key} needs {len(nodes) + 1} labels, has {len(seq)}")
        events.append(('open', key, seam_span))
        for k, node in enumerate(nodes):
            if is_mark(node):
                events.append(('point', seam_span[0]))
                continue
            child_path = key[1] + (k,)
            first, last = _component_ends(cat, labeling, j, node, child_path)
            if seq[k] != first or seq[k + 1] != last:
                raise LabelingError(f"seam {key}: composition condition fails at child {k}")
            _check_component(collection, labeling, j, node, seam_span, seam_sub, child_path, events)
        events.append(('close', key, seam_span))


def _check_matching(labeling: Labeling, j: int, events: List[Tuple]) -> None:
    """Consecutive seams over one vertex with no point between share an endpoint"""
    last_closed: Dict[Span, SeamKey] = {}
    point_since: Dict[Span, bool] = {}
    for event in events:
        if event[0] == 'point':
            for span in point_since:
                if span[0] <= event[1] <= span[1]:
                    point_since[span] = True
        elif event[0] == 'open':
            _, key, span = event
            previous = last_closed.get(span)
            if previous is not None and not point_since.get(span, False):
                if labeling[previous][-1] != labeling[key][0]:
                    raise LabelingError(f"block {j}: seams {previous} and {key} do not match")
        else:
            _, key, span = event
            last_closed[span] = key
            point_since[span] = False


# Decomposition shapes

def decomposition_shapes(collection: Collection, c: Coppice) -> Tuple[List[Collection], List[Collection]]:
    """Collections of the single-seam bubbles and of the internal seam-tree vertices

    Returns:
        tuple: One collection of shape (1,1,((#in))) per single-seam bubble in
        traversal order, and per internal seam-tree vertex in preorder one
        collection with a block for every multi-seam bubble over it
    """
    singles, multis = _decomposition_shapes(collection, collection.cat, c)
    return list(singles), list(multis)


@lru_cache(maxsize=None)
def _decomposition_shapes(collection: Collection, cat: Any, c: Coppice) -> Tuple[Tuple[Collection, ...], Tuple[Collection, ...]]:
    labeling = induced_labeling(collection, c)
    objects, tree = collection.objects, c.seam
    singles: List[Collection] = []
    multis: Dict[Span, List[Tuple[Tuple[Any, ...], ...]]] = {}
    for j, bubble in enumerate(c.bubbles, start=1):
        for comp, span, sub, path in _components_with_paths(bubble, (1, tree.leaves), tree, ()):
            if comp.kind is ComponentKind.SINGLE:
                lo, hi = span
                singles.append(Collection(cat, (objects[lo - 1], objects[hi]),
                                          ((labeling[(j, path + (0,))],),)))
            else:
                columns = tuple(labeling[(j, path + (m,))] for m in range(len(comp.seams)))
                multis.setdefault(span, []).append(columns)
    vertex_collections = []
    for span, sub in tree.internal_vertices():
        if span not in multis:
            continue
        ends = [objects[span[0] - 1]] + [objects[hi] for _, hi in sub.child_spans(span[0])]
        vertex_collections.append(Collection(cat, tuple(ends), tuple(multis[span])))
    return tuple(singles), tuple(vertex_collections)


def _components_with_paths(comp: Component, span: Span, sub: PlanarTree, path: Tuple[int, ...]):
    yield comp, span, sub, path
    for m, (nodes, seam_span, seam_sub) in enumerate(seam_slots(comp, span, sub)):
        for k, node in enumerate(nodes):
            if not is_mark(node):
                yield from _components_with_paths(node, seam_span, seam_sub, path + (m, k))


# Cuts

Cut = Tuple[Descriptor, Coppice, Coppice]


def _frontier_options(nodes) -> List[Tuple[Tuple, List[Component]]]:
    """Ways to split a seam's bubbles into kept single-seam bubbles and a frontier"""
    options: List[Tuple[Tuple, List[Component]]] = [((), [])]
    for node in nodes:
        choices: List[Tuple[Any, List[Component]]] = [(MARK, [node])]
        if node.kind is ComponentKind.SINGLE:
            for inner_nodes, frontier in _frontier_options(node.seams[0]):
                choices.append((single(inner_nodes), frontier))
        options = [(done + (choice,), fr + more) for done, fr in options for choice, more in choices]
    return options


def _replace_node(comp: Component, path: Tuple[int, ...], new) -> Component:
    m, k = path[0], path[1]
    seam = list(comp.seams[m])
    seam[k] = new if len(path) == 2 else _replace_node(seam[k], path[2:], new)
    seams = list(comp.seams)
    seams[m] = tuple(seam)
    return Component(comp.kind, tuple(seams))


def _type1_cuts(c: Coppice) -> Iterator[Cut]:
    tree = c.seam
    for j, bubble in enumerate(c.bubbles, start=1):
        counts = [0] * tree.leaves
        found = []

        def walk(comp: Component, span: Span, sub: PlanarTree, path: Tuple[int, ...]) -> None:
            for m, (nodes, seam_span, seam_sub) in enumerate(seam_slots(comp, span, sub)):
                for k, node in enumerate(nodes):
                    if is_mark(node):
                        counts[seam_span[0] - 1] += 1
                        continue
                    if node.kind is ComponentKind.SINGLE and seam_sub.is_leaf:
                        i = seam_span[0]
                        found.append((i, counts[i - 1], node, path + (m, k)))
                    walk(node, seam_span, seam_sub, path + (m, k))

        walk(bubble, (1, tree.leaves), tree, ())
        for i, s, node, path in found:
            outer_root = _replace_node(bubble, path, MARK)
            outer = Coppice(tree, c.bubbles[:j - 1] + (outer_root,) + c.bubbles[j:])
            yield Type1(i, j, s, node.mass), outer, Coppice(LEAF, (node,))


def _type3_cuts(c: Coppice) -> Iterator[Cut]:
    tree = c.seam
    if tree.is_leaf:
        return
    for j, bubble in enumerate(c.bubbles, start=1):
        if bubble.kind is not ComponentKind.SINGLE:
            continue
        for nodes, frontier in _frontier_options(bubble.seams[0]):
            if not frontier:
                continue
            parts = tuple(block_counts(tree, comp) for comp in frontier)
            outer = Coppice(LEAF, (single(nodes),))
            inner = Coppice(tree, c.bubbles[:j - 1] + tuple(frontier) + c.bubbles[j:])
            yield Type3(j, parts), outer, inner


def _entry_options(comp: Component, span: Span, sub: PlanarTree, target: Span) -> List[Tuple[Component, List[Component]]]:
    per_seam = []
    for nodes, seam_span, seam_sub in seam_slots(comp, span, sub):
        if seam_span == target and comp.kind is ComponentKind.MULTI:
            per_seam.append(_frontier_options(nodes))
            continue
        options: List[Tuple[Tuple, List[Component]]] = [((), [])]
        for node in nodes:
            if is_mark(node):
                choices = [(node, [])]
            else:
                choices = _entry_options(node, seam_span, seam_sub, target)
            options = [(done + (choice,), fr + more) for done, fr in options for choice, more in choices]
        per_seam.append(options)
    combined: List[Tuple[Tuple, List[Component]]] = [((), [])]
    for options in per_seam:
        combined = [(done + (seam,), fr + more) for done, fr in combined for seam, more in options]
    return [(Component(comp.kind, seams), frontier) for seams, frontier in combined]


def _type2_cuts(c: Coppice) -> Iterator[Cut]:
    tree = c.seam
    r = tree.leaves
    for span, sub in tree.internal_vertices():
        if span == (1, r):
            continue
        s, t = span[0] - 1, span[1] - span[0] + 1
        per_block = [_entry_options(bubble, (1, r), tree, span) for bubble in c.bubbles]
        combos: List[Tuple[Tuple, Tuple]] = [((), ())]
        for options in per_block:
            combos = [(roots + (root,), fronts + (tuple(frontier),))
                      for roots, fronts in combos for root, frontier in options if frontier]
        for roots, fronts in combos:
            parts = tuple(tuple(block_counts(sub, comp) for comp in frontier) for frontier in fronts)
            outer = Coppice(collapse(tree, span), roots)
            inner = Coppice(sub, tuple(comp for frontier in fronts for comp in frontier))
            yield Type2(s, t, parts), outer, inner


def cuts(c: Coppice) -> List[Cut]:
    """Every way of writing an unstable stratum as one glued boundary term"""
    return list(_type1_cuts(c)) + list(_type2_cuts(c)) + list(_type3_cuts(c))


def decompositions(collection: Collection, c: Coppice) -> FrozenSet[Tuple[str, ...]]:
    """Leaf collections of every complete sequence of cuts

    Returns:
        frozenset: Sorted tuples of collection text forms, one per distinct
        outcome; uncuttable strata other than top strata yield nothing
    """
    return _decompositions(collection, collection.cat, c)


@lru_cache(maxsize=None)
def _decompositions(collection: Collection, cat: Any, c: Coppice) -> FrozenSet[Tuple[str, ...]]:
    options = cuts(c)
    if not options:
        if c == top_stratum(c.shape):
            return frozenset({(format_collection(collection),)})
        return frozenset()
    found = set()
    for d, outer, inner in options:
        outer_collection, inner_collection = desc_collections(collection, d)
        for left in decompositions(outer_collection, outer):
            for right in decompositions(inner_collection, inner):
                found.add(tuple(sorted(left + right)))
    return frozenset(found)


def assoc_check(shape: Shape, c: Coppice, max_codim: int = ASSOC_MAX_CODIM) -> bool:
    """Every order of boundary decompositions reaching c gives the same factors

    The factors must also agree with decomposition_shapes on the canonical
    unstable representative of c.

    Raises:
        ShapeError: If c has another shape or its codimension exceeds max_codim
    """
    if c.shape != shape:
        raise ShapeError(f"stratum has shape {c.shape}, expected {shape}")
    if codim(c) > max_codim:
        raise ShapeError(f"codimension {codim(c)} exceeds {max_codim}")
    collection = symbolic_collection(shape)
    lifted = ghost_lift(c)
    outcomes = decompositions(collection, lifted)
    singles, multis = decomposition_shapes(collection, lifted)
    expected = tuple(sorted(format_collection(x) for x in singles + multis))
    if len(outcomes) != 1:
        logger.warning("stratum %s decomposes in %d inequivalent ways", c, len(outcomes))
        return False
    return next(iter(outcomes)) == expected
