import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abstat._exact import at_least, ceil_exact, exact, floor_exact, fmt, index_power, iroot, power


def test_floats_read_through_repr():
    assert exact(0.1) == Fraction(1, 10)
    assert exact("1/3") == Fraction(1, 3)
    assert exact(Fraction(4, 2)) == 2 and isinstance(exact(Fraction(4, 2)), int)


def test_booleans_rejected():
    with pytest.raises(TypeError):
        exact(True)


def test_at_least_is_exact_for_rationals():
    assert at_least(Fraction(1, 2), exact(0.5))
    assert at_least(Fraction(1, 3), exact(0.3333333333333333))
    assert not at_least(exact(0.3333333333333333), Fraction(1, 3))


def test_power_keeps_integer_exponents_exact():
    assert power(Fraction(1, 2), 3) == Fraction(1, 8)
    assert power(2, -2) == Fraction(1, 4)
    assert isinstance(power(2, Fraction(1, 2)), float)


def test_index_power_of_huge_index():
    k = math.factorial(300)
    assert 0 < index_power(k, Fraction(1, 2)) < 1e-300


@given(st.integers(0, 10**60), st.integers(1, 7))
def test_iroot_is_floor_root(x, n):
    r = iroot(x, n)
    assert r**n <= x < (r + 1) ** n


@given(st.fractions())
def test_floor_ceil(x):
    assert floor_exact(x) == math.floor(x)
    assert ceil_exact(x) == math.ceil(x)


def test_fmt():
    assert fmt(10**30) == "1" + "0" * 30
    assert fmt(1 / 3) == "0.33333333333333331"
    assert fmt(None) == ""
