"""Versioned JSON interchange files for flow categories

Keys are written sorted and every list in a canonical order, so saving a
loaded file reproduces it byte for byte.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Union

from ..config import FILE_MAGIC, FORMAT_VERSION
from ..utils.rational_utils import format_rational, parse_rational
from .errors import CompositionError, SchemaError, ShapeError
from .flowcat import Endpoint, FlowCat2, ModuliEdge, ModuliPoint
from .shapes import EvalGrid, OneCat, ShapeBound, make_collection, parse_desc

logger = logging.getLogger(__name__)

_TOP_FIELDS = {'magic', 'format_version', 'bound', 'cap', 'epsilon', 'objects', 'onemors',
               'twomor_generators', 'points', 'edges'}
_ONEMOR_FIELDS = {'arrows', 'identities', 'compose'}
_POINT_FIELDS = {'id', 'objects', 'grid', 'inputs', 'outputs', 'energy', 'stratum'}
_EDGE_FIELDS = _POINT_FIELDS | {'ends'}
_END_FIELDS = {'desc', 'left', 'right'}


def to_dict(cat: FlowCat2) -> Dict[str, Any]:
    """Plain-data form of a flow category"""
    onecat = cat.cat.to_dict()
    return {
        'magic': FILE_MAGIC,
        'format_version': FORMAT_VERSION,
        'bound': cat.bound.to_list(),
        'cap': format_rational(cat.cap),
        'epsilon': format_rational(cat.epsilon),
        'objects': onecat['objects'],
        'onemors': {
            'arrows': onecat['onemors'],
            'identities': onecat['identities'],
            'compose': onecat['compose'],
        },
        'twomor_generators': {g: list(ends) for g, ends in sorted(cat.generators.items())},
        'points': [_point_dict(cat.points[pid]) for pid in sorted(cat.points)],
        'edges': [_edge_dict(cat.edges[eid]) for eid in sorted(cat.edges)],
    }


def _moduli_dict(item: Union[ModuliPoint, ModuliEdge]) -> Dict[str, Any]:
    data = {
        'id': item.id,
        'objects': list(item.collection.objects),
        'grid': [[list(col) for col in block] for block in item.collection.grid],
        'inputs': [[list(col) for col in block] for block in item.evals.alpha],
        'outputs': list(item.evals.beta),
        'energy': format_rational(item.energy),
    }
    if item.stratum is not None:
        data['stratum'] = item.stratum
    return data


def _point_dict(point: ModuliPoint) -> Dict[str, Any]:
    return _moduli_dict(point)


def _edge_dict(edge: ModuliEdge) -> Dict[str, Any]:
    data = _moduli_dict(edge)
    data['ends'] = [{'desc': str(end.desc), 'left': end.left, 'right': end.right} for end in edge.ends]
    return data


def dumps(cat: FlowCat2) -> str:
    return json.dumps(to_dict(cat), indent=2, sort_keys=True) + "\n"


def save(cat: FlowCat2, path: Union[str, Path]) -> None:
    """Write a flow category to an interchange file"""
    Path(path).write_text(dumps(cat), encoding='utf-8')
    logger.debug("saved %d points and %d edges to %s", len(cat.points), len(cat.edges), path)


def load(path: Union[str, Path]) -> FlowCat2:
    """Read a flow category from an interchange file

    Raises:
        SchemaError: If the file is not valid JSON or breaks the schema; the
            message names the offending field or id
    """
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e}")
    return loads(text)


def loads(text: str) -> FlowCat2:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno}: {e.msg}")
    return from_dict(data)


def _fields(data: Any, allowed: set, required: set, where: str) -> None:
    if not isinstance(data, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise SchemaError(f"{where}: unknown field {unknown[0]!r}")
    missing = sorted(required - set(data))
    if missing:
        raise SchemaError(f"{where}: missing field {missing[0]!r}")


def _rational(value: Any, where: str) -> Fraction:
    try:
        return parse_rational(str(value))
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: {value!r} is not a p/q rational")


def from_dict(data: Dict[str, Any]) -> FlowCat2:
    """Inverse of to_dict with schema checks"""
    _fields(data, _TOP_FIELDS, _TOP_FIELDS, "file")
    if data['magic'] != FILE_MAGIC:
        raise SchemaError(f"magic: expected {FILE_MAGIC!r}")
    if data['format_version'] != FORMAT_VERSION:
        raise SchemaError(f"format_version: unsupported version {data['format_version']!r}")
    _fields(data['onemors'], _ONEMOR_FIELDS, _ONEMOR_FIELDS, "onemors")
    try:
        onecat = OneCat.from_dict({
            'objects': data['objects'],
            'onemors': data['onemors']['arrows'],
            'identities': data['onemors']['identities'],
            'compose': data['onemors']['compose'],
        })
    except (CompositionError, KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"onemors: {e}")
    bound = data['bound']
    if not (isinstance(bound, list) and len(bound) == 3 and all(isinstance(x, int) for x in bound)):
        raise SchemaError("bound: expected [r, a, n]")
    generators = {}
    for g, ends in data['twomor_generators'].items():
        if not (isinstance(ends, list) and len(ends) == 2) or any(f not in onecat.onemors for f in ends):
            raise SchemaError(f"twomor_generators.{g}: expected two known 1-morphisms")
        generators[g] = (ends[0], ends[1])
    points = {}
    for n, item in enumerate(data['points']):
        point = _load_point(onecat, item, f"points[{n}]")
        if point.id in points:
            raise SchemaError(f"points[{n}]: duplicate id {point.id!r}")
        points[point.id] = point
    edges = {}
    for n, item in enumerate(data['edges']):
        edge = _load_edge(onecat, item, points, f"edges[{n}]")
        if edge.id in edges:
            raise SchemaError(f"edges[{n}]: duplicate id {edge.id!r}")
        edges[edge.id] = edge
    return FlowCat2(onecat, generators, points, edges, ShapeBound(*bound),
                    _rational(data['cap'], "cap"), _rational(data['epsilon'], "epsilon"))


def _load_moduli(onecat: OneCat, item: Dict[str, Any], where: str):
    try:
        collection = make_collection(onecat, item['objects'], item['grid'])
        evals = EvalGrid(item['inputs'], item['outputs'])
    except (CompositionError, ShapeError, TypeError) as e:
        raise SchemaError(f"{where} ({item.get('id')}): {e}")
    if evals.shape != collection.shape:
        raise SchemaError(f"{where} ({item['id']}): inputs do not match the grid")
    return collection, evals, _rational(item['energy'], f"{where}.energy")


def _load_point(onecat: OneCat, item: Any, where: str) -> ModuliPoint:
    _fields(item, _POINT_FIELDS, _POINT_FIELDS - {'stratum'}, where)
    collection, evals, energy = _load_moduli(onecat, item, where)
    return ModuliPoint(item['id'], collection, evals, energy, item.get('stratum'))


def _load_edge(onecat: OneCat, item: Any, points: Dict[str, ModuliPoint], where: str) -> ModuliEdge:
    _fields(item, _EDGE_FIELDS, _EDGE_FIELDS - {'stratum'}, where)
    collection, evals, energy = _load_moduli(onecat, item, where)
    ends: List[Endpoint] = []
    for n, end in enumerate(item['ends']):
        end_where = f"{where}.ends[{n}]"
        _fields(end, _END_FIELDS, _END_FIELDS, end_where)
        for side in ('left', 'right'):
            if end[side] not in points:
                raise SchemaError(f"{end_where}: unknown point id {end[side]!r}")
        try:
            desc = parse_desc(end['desc'])
        except ValueError as e:
            raise SchemaError(f"{end_where}.desc: {e}")
        ends.append(Endpoint(desc, end['left'], end['right']))
    return ModuliEdge(item['id'], collection, evals, energy, tuple(ends), item.get('stratum'))
