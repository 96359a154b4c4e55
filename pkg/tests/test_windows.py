import math
from fractions import Fraction

import pytest

from abstat.errors import ConstructionFailed, InvalidScheme, OutOfHorizon
from abstat.windows import construct_slow_ratio_blocks, liminf_ratio, make_scheme, scheme_from_config


def test_squares_windows():
    s = make_scheme("squares", horizon=10)
    w = s.window(5)
    assert (w.lo, w.hi, w.width) == (17, 25, 9)
    assert w.density(1, 0.5) == pytest.approx(1 / 3)


def test_classical_and_power():
    assert make_scheme("classical", horizon=5).window(4).width == 4
    assert make_scheme("powerOfN", {"exponent": 2}, horizon=5).window(3).hi == 9


def test_factorial_windows_are_big_integers():
    w = make_scheme("factorialEven", horizon=12).window(4)
    assert (w.lo, w.hi) == (40320, 362880)
    big = make_scheme("factorialOdd", horizon=30).window(30)
    assert big.hi == math.factorial(62)
    # density through logs when h exceeds 2^53
    assert big.density(2, 0.5) == pytest.approx(2 / math.sqrt(math.factorial(62) - math.factorial(61) + 1), rel=1e-12)


def test_lacunary_and_lambda():
    lac = make_scheme("lacunary", {"k": [0, 2, 6, 14]})
    assert [(w.lo, w.hi) for w in lac.windows(range(1, 4))] == [(1, 2), (3, 6), (7, 14)]
    lam = make_scheme("lambda", {"lam": [1, 2, 2, 3]})
    assert [(w.lo, w.hi) for w in lam.windows(range(1, 5))] == [(1, 1), (1, 2), (2, 3), (2, 4)]


def test_invalid_schemes_report_n():
    with pytest.raises(InvalidScheme, match="n=3"):
        make_scheme("explicitTable", {"alpha": [1, 2, 1], "beta": [2, 3, 4]})
    with pytest.raises(InvalidScheme):
        make_scheme("custom", {"alpha": "n + 1", "beta": "n"}, 4)
    with pytest.raises(InvalidScheme):
        make_scheme("custom", {"alpha": "n + 1/3", "beta": "n + 1/2"}, 2)


def test_out_of_horizon():
    with pytest.raises(OutOfHorizon):
        make_scheme("squares", horizon=3).window(4)


def test_custom_expression_round_trip():
    s = make_scheme("custom", {"alpha": "n", "beta": "n + ceil_sqrt(n)"}, 50)
    again = scheme_from_config(s.describe())
    assert [again.window(n) for n in range(1, 51)] == [s.window(n) for n in range(1, 51)]


def test_custom_expression_rejects_code():
    with pytest.raises(Exception):
        make_scheme("custom", {"alpha": "__import__('os')", "beta": "n"}, 2)


def test_factorial_ratio_diagnostic():
    s = make_scheme("custom", {"alpha": "factorial(n)", "beta": "factorial(n + 1)"}, 10)
    rep = liminf_ratio(s, 1, 10)
    assert rep.min_ratio == 2 and rep.argmin == 1 and rep.trend == "increasing"
    assert [r for _, r in rep.ratios] == list(range(2, 12))


def test_slow_ratio_blocks():
    s = make_scheme("custom", {"alpha": "n", "beta": "n + ceil_sqrt(n)"}, 100_000)
    blocks = construct_slow_ratio_blocks(s, 7)
    assert [b[:3] for b in blocks[:6]] == [
        (3, 3, 5), (8, 8, 11), (28, 28, 34), (125, 125, 137), (660, 660, 686), (4053, 4053, 4117)]
    for j, ((r, lo, hi), prev) in enumerate(zip(blocks, [None] + blocks), start=1):
        assert Fraction(hi, lo) < 1 + Fraction(1, j)
        if prev:
            assert lo > prev[2] and s.beta(r - 1) / prev[2] >= j


def test_slow_ratio_blocks_fail_for_factorial_scheme():
    s = make_scheme("custom", {"alpha": "factorial(n)", "beta": "factorial(n + 1)"}, 10)
    with pytest.raises(ConstructionFailed) as info:
        construct_slow_ratio_blocks(s, 3)
    assert info.value.j == 1
