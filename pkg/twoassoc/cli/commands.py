"""Subcommand handlers; results go to stdout, diagnostics to the log"""

import json
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence, TextIO

from ..config import DEFAULT_CAP, DEFAULT_EPSILON
from ..core import interchange
from ..core.errors import TwoAssocError
from ..core.flowcat import FlowCat2, validate
from ..core.gen import Family, GenSpec, fill_strata, mutate_break
from ..core.linearize import (bifunctor_identity_check, check_a2, check_a_infty, extract_all,
                              fiber_compat_problems, residual_report)
from ..core.novikov import nov_format
from ..core.polytopes import coppice_dim, enum_fiber, enum_w, face_poset, format_coppice, is_stable
from ..core.shapes import Shape, ShapeBound, desc_shapes, enum_desc, format_collection, format_evals, format_shape
from ..core.trees import enum_k, f_vector, format_tree, k_dim
from ..utils.dot_export import export_dot_graph, poset_to_dot
from ..utils.rational_utils import parse_matrix, parse_rational
from .parser import build_parser

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(TwoAssocError):
    """A flag value cannot be interpreted"""


def _shape(text: str) -> Shape:
    try:
        return Shape.of(parse_matrix(text))
    except ValueError as e:
        raise UsageError(f"--n: {e}")


def _row(text: str) -> List[int]:
    rows = _shape(text).n
    if len(rows) != 1:
        raise UsageError("--n: expected a single row")
    return list(rows[0])


def _rational(text: Optional[str], default, flag: str):
    if text is None:
        return default
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{flag}: {text!r} is not a p/q rational")


def _bound(text: Optional[str]) -> Optional[ShapeBound]:
    if text is None:
        return None
    try:
        values = [int(x) for x in text.split(',')]
    except ValueError:
        values = []
    if len(values) != 3:
        raise UsageError(f"--shape-max: expected r,a,n, got {text!r}")
    return ShapeBound(*values)


def _emit_strata(lines: List[str], dims: List[int], fvector: bool, out: TextIO) -> None:
    if fvector:
        out.write(" ".join(str(x) for x in f_vector(dims)) + "\n")
        return
    for line in lines:
        out.write(line + "\n")
    out.write(f"{len(lines)} strata\n")


def cmd_k(args, out: TextIO) -> int:
    trees = enum_k(args.r)
    _emit_strata([f"{k_dim(t)} {format_tree(t)}" for t in trees], [k_dim(t) for t in trees], args.fvector, out)
    return EXIT_OK


def cmd_w(args, out: TextIO) -> int:
    strata = enum_w(_row(args.n), stable_only=args.stable_only)
    _emit_strata([f"{coppice_dim(tp)} {format_coppice(tp)}" for tp in strata],
                 [coppice_dim(tp) for tp in strata], args.fvector, out)
    return EXIT_OK


def cmd_fiber(args, out: TextIO) -> int:
    strata = enum_fiber(_shape(args.n))
    if args.stable_only:
        strata = [c for c in strata if is_stable(c)]
    _emit_strata([f"{coppice_dim(c)} {format_coppice(c)}" for c in strata],
                 [coppice_dim(c) for c in strata], args.fvector, out)
    return EXIT_OK


def cmd_desc(args, out: TextIO) -> int:
    shape = _shape(args.n)
    cap = _rational(args.cap, DEFAULT_CAP, "--cap")
    epsilon = _rational(args.epsilon, DEFAULT_EPSILON, "--epsilon")
    found = enum_desc(shape, cap, epsilon)
    for d in found:
        outer, inner = desc_shapes(shape, d)
        out.write(f"{d} {format_shape(outer)} {format_shape(inner)}\n")
    out.write(f"{len(found)} descriptors\n")
    return EXIT_OK


def cmd_validate(args, out: TextIO) -> int:
    report = validate(interchange.load(args.infile))
    out.write(report.format() + "\n")
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_mu(args, out: TextIO) -> int:
    family = extract_all(interchange.load(args.infile))
    count = 0
    for L in family.collections():
        tensor = family.tensors[L]
        for evals in sorted(tensor.entries, key=format_evals):
            out.write(f"{format_collection(L)} : {format_evals(evals)} = {nov_format(tensor.entries[evals])}\n")
            count += 1
    out.write(f"{count} entries\n")
    return EXIT_OK


def _with_flags(cat: FlowCat2, args) -> FlowCat2:
    bound = _bound(args.shape_max) or cat.bound
    return cat.copy_with(bound=bound, cap=_rational(args.cap, cat.cap, "--cap"),
                         epsilon=_rational(args.epsilon, cat.epsilon, "--epsilon"))


def cmd_check(args, out: TextIO) -> int:
    family = extract_all(_with_flags(interchange.load(args.infile), args))
    if args.which == 'compat':
        problems = fiber_compat_problems(family, 1) + fiber_compat_problems(family, 2)
        for problem in problems:
            out.write(problem + "\n")
        out.write(f"{len(problems)} problems\n")
        return EXIT_FAILED if problems else EXIT_OK
    if args.which == 'ainf':
        residuals = check_a_infty(family)
    elif args.which == 'a2':
        residuals = check_a2(family)
    else:
        residuals = bifunctor_identity_check(family)
    out.write(residual_report(residuals) + "\n")
    return EXIT_FAILED if residuals else EXIT_OK


def cmd_gen(args, out: TextIO) -> int:
    params: Dict = {}
    if args.matrix:
        rows = parse_matrix(args.matrix)
        params = {'basis': [f"b{i}" for i in range(len(rows))], 'matrix': [list(row) for row in rows]}
    elif args.size is not None:
        params = {'size': args.size, 'rank': args.rank}
    if args.algebra:
        params['algebra'] = args.algebra
    if args.instance:
        params['instance'] = args.instance
    bound = _bound(args.shape_max)
    spec = GenSpec(Family(args.family), params, args.seed, tuple(bound.to_list()) if bound else None,
                   _rational(args.cap, DEFAULT_CAP, "--cap"), _rational(args.epsilon, DEFAULT_EPSILON, "--epsilon"))
    cat = spec.build()
    if args.strata:
        cat = fill_strata(cat)
    provenance = spec.to_dict()
    if args.mutate is not None:
        cat = mutate_break(cat, args.mutate)
        provenance['mutate'] = args.mutate
    interchange.save(cat, args.out)
    out.write(json.dumps(provenance, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_export(args, out: TextIO) -> int:
    shape = _shape(args.n)
    strata = enum_fiber(shape)
    dims = {format_coppice(c): coppice_dim(c) for c in strata}
    covers = face_poset(shape)
    name = f"W{format_shape(shape)}"
    if args.out:
        export_dot_graph(covers, dims, args.out, name)
        out.write(f"{len(covers)} strata written to {args.out}\n")
    else:
        out.write(poset_to_dot(covers, dims, name))
    return EXIT_OK


COMMANDS: Dict[str, Callable] = {
    'k': cmd_k,
    'w': cmd_w,
    'fiber': cmd_fiber,
    'desc': cmd_desc,
    'validate': cmd_validate,
    'mu': cmd_mu,
    'check': cmd_check,
    'gen': cmd_gen,
    'export': cmd_export,
}


def run(argv: Sequence[str], out: Optional[TextIO] = None) -> int:
    """Run one subcommand and return its exit status

    Exit status is 0 on success, 1 when a report has violations or
    residuals and 2 on usage, file or schema errors.
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if getattr(args, 'log_level', None):
        logging.getLogger().setLevel(args.log_level)
    try:
        return COMMANDS[args.command](args, out)
    except (TwoAssocError, OSError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
