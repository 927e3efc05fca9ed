import random
from fractions import Fraction

import pytest

from twoassoc.core.novikov import (ONE, ZERO, NovElem, as_energy, monomial, nov_add, nov_count, nov_format,
                                   nov_from_terms, nov_mul, nov_parse, nov_scale, nov_sum, nov_truncate,
                                   nov_valuation, within_cap)
from twoassoc.utils.rational_utils import format_matrix, format_rational, parse_cap, parse_matrix, parse_rational


def _random_elem(rng: random.Random) -> NovElem:
    exponents = [Fraction(rng.randint(0, 12), rng.choice([1, 2, 3])) for _ in range(rng.randint(0, 5))]
    return nov_from_terms(exponents)


def test_repeated_exponents_cancel():
    assert nov_from_terms([1, 1, 2]) == monomial(2)
    assert nov_count(["1/2", "1/2"]) == ZERO
    assert nov_count([0, 0, 0]) == ONE


def test_canonical_form_rejects_duplicates():
    with pytest.raises(ValueError):
        NovElem((Fraction(1), Fraction(1)))


@pytest.mark.parametrize("value", [0.5, -1, "-1/2"])
def test_as_energy_rejects(value):
    with pytest.raises(ValueError):
        as_energy(value)


def test_as_energy():
    assert as_energy("2/4") == Fraction(1, 2)
    assert as_energy(3) == Fraction(3)


def test_truncation_keeps_the_cap():
    x = nov_from_terms([0, 1, 2, 3])
    assert nov_truncate(x, Fraction(2)) == nov_from_terms([0, 1, 2])
    assert nov_truncate(x, None) == x
    assert within_cap(Fraction(2), Fraction(2))
    assert not within_cap(Fraction(5, 2), Fraction(2))
    assert within_cap(Fraction(100), None)


def test_valuation():
    assert nov_valuation(ZERO) == float('inf')
    assert nov_valuation(nov_from_terms(["3/2", 2])) == Fraction(3, 2)


def test_format_and_parse():
    x = nov_from_terms([0, "1/2", 2])
    assert nov_format(x) == "1 + T^{1/2} + T^{2}"
    assert nov_parse("1 + T^{1/2} + T^{2}") == x
    assert nov_format(ZERO) == "0"
    assert nov_parse("0") == ZERO


@pytest.mark.parametrize("text", ["T^{1} + T^{1}", "T^1", "2"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        nov_parse(text)


@pytest.mark.parametrize("text", ["T^{0}", "T^{2/4}", "1 + T^{3/1}", "T^{2} + 1", "T^{-0}"])
def test_parse_rejects_non_canonical_text(text):
    with pytest.raises(ValueError, match="non-canonical|out of order"):
        nov_parse(text)


def test_scale():
    assert nov_scale(nov_from_terms([0, 1]), Fraction(1), Fraction(1)) == monomial(1)


def test_field_laws_randomized():
    rng = random.Random(20240611)
    cap = Fraction(4)
    for _ in range(2000):
        x, y, z = _random_elem(rng), _random_elem(rng), _random_elem(rng)
        assert nov_add(x, y) == nov_add(y, x)
        assert nov_add(nov_add(x, y), z) == nov_add(x, nov_add(y, z))
        assert nov_add(x, x) == ZERO
        assert nov_mul(x, nov_add(y, z)) == nov_add(nov_mul(x, y), nov_mul(x, z))
        assert nov_mul(x, ONE) == x
        assert nov_mul(x, y, cap) == nov_truncate(nov_mul(x, y), cap)
        assert nov_sum([x, y, z]) == x + y + z


def test_count_of_products_is_product_of_counts():
    rng = random.Random(7)
    for _ in range(500):
        left = [Fraction(rng.randint(0, 6), 2) for _ in range(rng.randint(0, 4))]
        right = [Fraction(rng.randint(0, 6), 3) for _ in range(rng.randint(0, 4))]
        glued = [a + b for a in left for b in right]
        assert nov_count(glued) == nov_mul(nov_count(left), nov_count(right))


def test_parse_rational():
    assert parse_rational("2/6") == Fraction(1, 3)
    assert parse_rational(" 3 ") == Fraction(3)
    assert format_rational(Fraction(3)) == "3"
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(ValueError):
        parse_rational("")


def test_parse_cap():
    assert parse_cap("inf") is None
    assert parse_cap(None) is None
    assert parse_cap("5/2") == Fraction(5, 2)


def test_parse_matrix():
    assert parse_matrix("1,0;0,1") == ((1, 0), (0, 1))
    assert format_matrix(((1, 0), (0, 2))) == "1,0;0,2"
    with pytest.raises(ValueError):
        parse_matrix("1,-1")
    with pytest.raises(ValueError):
        parse_matrix("1;;2")
