"""Exact arithmetic in the universal Novikov field over the two-element field

An element is a finite set of exponents; each exponent carries the implicit
coefficient 1. Every series is finite in storage and is kept identical to its
truncation at the energy cap of the computation it belongs to.
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

from ..utils.rational_utils import format_rational, parse_rational

logger = logging.getLogger(__name__)

Energy = Fraction
# None stands for an unbounded cap
EnergyCap = Optional[Fraction]

_TERM = re.compile(r"^T\^\{(-?\d+(?:/\d+)?)\}$")


def as_energy(value: Union[int, str, Fraction]) -> Energy:
    """Convert a value to a nonnegative exact energy

    Args:
        value: An int, a Fraction or a "p/q" string

    Returns:
        Fraction: The energy

    Raises:
        ValueError: For floats or negative values
    """
    if isinstance(value, float):
        raise ValueError("energies are exact rationals, got a float")
    energy = parse_rational(value) if isinstance(value, str) else Fraction(value)
    if energy < 0:
        raise ValueError(f"energy must be nonnegative, got {energy}")
    return energy


def within_cap(energy: Fraction, cap: EnergyCap) -> bool:
    """Check an energy against an inclusive cap"""
    return cap is None or energy <= cap


@dataclass(frozen=True)
class NovElem:
    """Element of the Novikov field with coefficients in the two-element field"""
    terms: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(Fraction(term) for term in self.terms))
        if any(a == b for a, b in zip(ordered, ordered[1:])):
            raise ValueError("duplicate exponent in canonical Novikov element")
        object.__setattr__(self, 'terms', ordered)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: 'NovElem') -> 'NovElem':
        return nov_add(self, other)

    def __str__(self) -> str:
        return nov_format(self)

    def __repr__(self) -> str:
        return f"NovElem({nov_format(self)!r})"


ZERO = NovElem()
ONE = NovElem((Fraction(0),))


def nov_from_terms(exponents: Iterable[Union[int, str, Fraction]]) -> NovElem:
    """Build an element from exponents, cancelling repeated ones in pairs"""
    counts = Counter(as_energy(e) for e in exponents)
    return NovElem(tuple(e for e, c in counts.items() if c % 2 == 1))


def monomial(energy: Union[int, str, Fraction]) -> NovElem:
    """The element T^energy"""
    return NovElem((as_energy(energy),))


def nov_add(x: NovElem, y: NovElem) -> NovElem:
    """Field addition: symmetric difference of the exponent sets"""
    return NovElem(tuple(set(x.terms) ^ set(y.terms)))


def nov_sum(elements: Iterable[NovElem]) -> NovElem:
    """Sum of any number of elements"""
    counts: Counter = Counter()
    for element in elements:
        counts.update(element.terms)
    return NovElem(tuple(e for e, c in counts.items() if c % 2 == 1))


def nov_truncate(x: NovElem, cap: EnergyCap) -> NovElem:
    """Drop every term with exponent above the cap (the cap itself is kept)"""
    if cap is None:
        return x
    return NovElem(tuple(e for e in x.terms if e <= cap))


def nov_mul(x: NovElem, y: NovElem, cap: EnergyCap = None) -> NovElem:
    """Truncated product: exponents add, coefficients multiply mod 2"""
    counts: Counter = Counter()
    for a in x.terms:
        if cap is not None and a > cap:
            break
        for b in y.terms:
            if cap is not None and a + b > cap:
                break
            counts[a + b] += 1
    return NovElem(tuple(e for e, c in counts.items() if c % 2 == 1))


def nov_scale(x: NovElem, energy: Fraction, cap: EnergyCap = None) -> NovElem:
    """Multiply by the monomial T^energy"""
    return nov_truncate(NovElem(tuple(e + energy for e in x.terms)), cap)


def nov_count(points: Iterable[Union[int, str, Fraction]]) -> NovElem:
    """Novikov count of a finite multiset of energies

    Args:
        points: Energies of the points of a 0-dimensional space

    Returns:
        NovElem: Sum of T^E over the points, so each distinct energy survives
        exactly when its multiplicity is odd
    """
    return nov_from_terms(points)


def nov_valuation(x: NovElem) -> Union[Fraction, float]:
    """Least exponent, or +inf for the zero element"""
    if not x.terms:
        return float('inf')
    return x.terms[0]


def nov_format(x: NovElem) -> str:
    """Render as "1 + T^{1/2} + T^{2}" with exponents ascending"""
    if not x.terms:
        return "0"
    parts = []
    for exponent in x.terms:
        if exponent == 0:
            parts.append("1")
        else:
            parts.append(f"T^{{{format_rational(exponent)}}}")
    return " + ".join(parts)


def nov_parse(text: str) -> NovElem:
    """Parse the text form produced by nov_format

    Only canonical text is accepted: exponents in lowest terms, the zero
    exponent written "1", terms in ascending order.

    Raises:
        ValueError: On malformed or non-canonical terms or repeated exponents
    """
    text = text.strip()
    if text == "0":
        return ZERO
    exponents = []
    for part in text.split('+'):
        part = part.strip()
        if part == "1":
            exponents.append(Fraction(0))
            continue
        match = _TERM.match(part)
        if not match:
            raise ValueError(f"malformed Novikov term {part!r}")
        exponent = as_energy(match.group(1))
        if exponent == 0 or format_rational(exponent) != match.group(1):
            raise ValueError(f"non-canonical Novikov term {part!r}")
        exponents.append(exponent)
    if len(set(exponents)) != len(exponents):
        raise ValueError(f"repeated exponent in {text!r}")
    if exponents != sorted(exponents):
        raise ValueError(f"exponents out of order in {text!r}")
    return NovElem(tuple(exponents))
