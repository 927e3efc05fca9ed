"""Utility functions for exact rationals and matrix flags"""

from fractions import Fraction
from typing import List, Optional, Tuple, Union


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse an exact rational from text

    Args:
        text (str): A rational like "3", "1/2" or "-2/6"

    Returns:
        Fraction: The value in lowest terms

    Raises:
        ValueError: If the text is not a rational, in particular a float
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    text = text.strip()
    if not text or '.' in text or 'e' in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    """Format a rational as "p/q", or "p" for integers

    Args:
        value (Fraction): The value to format

    Returns:
        str: Lowest-terms text form
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_cap(text: Optional[str]) -> Optional[Fraction]:
    """Parse an energy cap, where "inf" or None means unbounded"""
    if text is None:
        return None
    if text.strip().lower() in ('inf', 'none', 'unbounded'):
        return None
    return parse_rational(text)


def parse_matrix(text: str) -> Tuple[Tuple[int, ...], ...]:
    """Parse a nonnegative integer matrix from a flag value

    Rows are separated by ';' and entries by ','.

    Args:
        text (str): For example "1,0;0,1"

    Returns:
        tuple: Tuple of integer rows
    """
    rows: List[Tuple[int, ...]] = []
    for row in text.split(';'):
        row = row.strip()
        if not row:
            raise ValueError(f"empty row in matrix {text!r}")
        entries = tuple(int(entry) for entry in row.split(','))
        if any(entry < 0 for entry in entries):
            raise ValueError(f"negative entry in matrix {text!r}")
        rows.append(entries)
    return tuple(rows)


def format_matrix(rows) -> str:
    """Inverse of parse_matrix"""
    return ';'.join(','.join(str(entry) for entry in row) for row in rows)
