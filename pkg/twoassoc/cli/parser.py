"""Argument parser of the twoassoc command line"""

import argparse

from ..config import APP_NAME, APP_VERSION, LOG_LEVEL


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--log-level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help=f"logging level on stderr (default {LOG_LEVEL})")
    return parent


def _bounds(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--shape-max', help="bound r,a,n on width, blocks and block mass")
    parser.add_argument('--cap', help="energy cap p/q")
    parser.add_argument('--epsilon', help="minimal zero-shape energy p/q")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog=APP_NAME, description="2-associahedra and flow category checks")
    parser.add_argument('--version', action='version', version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest='command', required=True)

    k = sub.add_parser('k', help="strata of the associahedra K_r")
    k_sub = k.add_subparsers(dest='action', required=True)
    k_enum = k_sub.add_parser('enum', parents=[common])
    k_enum.add_argument('--r', type=int, required=True)
    k_enum.add_argument('--fvector', action='store_true', help="print the f-vector only")

    w = sub.add_parser('w', help="strata of the 2-associahedra W_n")
    w_sub = w.add_subparsers(dest='action', required=True)
    w_enum = w_sub.add_parser('enum', parents=[common])
    w_enum.add_argument('--n', required=True, help="marked points per seam, e.g. 1,0,2")
    w_enum.add_argument('--fvector', action='store_true')
    w_enum.add_argument('--stable-only', action='store_true')

    fiber = sub.add_parser('fiber', help="strata of fiber products over K_r")
    fiber_sub = fiber.add_subparsers(dest='action', required=True)
    fiber_enum = fiber_sub.add_parser('enum', parents=[common])
    fiber_enum.add_argument('--n', required=True, help="one row per block, e.g. 1,0;0,1")
    fiber_enum.add_argument('--fvector', action='store_true')
    fiber_enum.add_argument('--stable-only', action='store_true')

    desc = sub.add_parser('desc', parents=[common], help="boundary descriptors of a shape")
    desc.add_argument('--n', required=True)
    _bounds(desc)

    validate = sub.add_parser('validate', parents=[common], help="check a flow category file")
    validate.add_argument('--in', dest='infile', required=True)

    mu = sub.add_parser('mu', parents=[common], help="print the counted operations")
    mu.add_argument('--in', dest='infile', required=True)

    check = sub.add_parser('check', parents=[common], help="check equations of the counted operations")
    check.add_argument('which', choices=['ainf', 'a2', 'compat', 'bifunctor'])
    check.add_argument('--in', dest='infile', required=True)
    _bounds(check)

    gen = sub.add_parser('gen', parents=[common], help="write a generated flow category")
    gen.add_argument('family', choices=['trivial', 'square_zero', 'assoc_algebra', 'strict_2cat'])
    gen.add_argument('--out', required=True)
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--size', type=int, help="basis size of a random square-zero instance")
    gen.add_argument('--rank', type=int)
    gen.add_argument('--matrix', help="square-zero matrix rows, e.g. 0,0;1,0")
    gen.add_argument('--algebra', choices=['z2', 'idempotent'])
    gen.add_argument('--instance', choices=['terminal', 'z2', 'matrices'])
    gen.add_argument('--strata', action='store_true', help="label moduli with top strata")
    gen.add_argument('--mutate', type=int, metavar='SEED', help="break the result with this seed")
    _bounds(gen)

    export = sub.add_parser('export', help="graph export")
    export_sub = export.add_subparsers(dest='action', required=True)
    dot = export_sub.add_parser('dot', parents=[common], help="face poset of a fiber product as DOT")
    dot.add_argument('--n', required=True)
    dot.add_argument('--out')
    return parser
