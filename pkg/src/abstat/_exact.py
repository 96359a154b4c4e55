"""Exact-number helpers shared by every module.

Thresholds and bounds are compared in rational arithmetic whenever both
sides are rational; floats only appear for irrational quantities such as
``k ** -0.5``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, float]

# int ** -s goes through float(k); beyond this the conversion overflows
_FLOAT_SAFE = 2**1000


def exact(x) -> Number:
    """Coerce a user-supplied number to an exact value when it has one.

    Floats are read through their shortest repr, so ``0.1`` becomes
    ``Fraction(1, 10)`` rather than the binary neighbour. Strings such as
    ``"1/3"`` or ``"720"`` parse exactly.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, float):
        if not math.isfinite(x):
            return x
        return exact(Fraction(repr(x)))
    if isinstance(x, str):
        return exact(Fraction(x.strip()))
    if isinstance(x, Rational):
        return exact(Fraction(x.numerator, x.denominator))
    raise TypeError(f"cannot interpret {x!r} as a number")


_EXACT_TYPES = (int, Fraction)


def is_rational(x) -> bool:
    t = type(x)
    if t is int or t is Fraction:
        return True
    return isinstance(x, _EXACT_TYPES) and not isinstance(x, bool)


def at_least(value: Number, level: Number) -> bool:
    """``value >= level`` in exact arithmetic when both are rational."""
    if type(value) is float and type(level) is float:
        return value >= level
    if is_rational(value) and is_rational(level):
        return value >= level
    return float(value) >= float(level)


def power(base: Number, exponent: Number) -> Number:
    """``base ** exponent`` kept exact for rational base and integer exponent."""
    if is_rational(base) and is_rational(exponent) and Fraction(exponent).denominator == 1:
        e = int(exponent)
        if e >= 0:
            return Fraction(base) ** e if isinstance(base, Fraction) else base**e
        if base == 0:
            raise ZeroDivisionError("0 to a negative power")
        return Fraction(1) / Fraction(base) ** (-e)
    b = float(base)
    if b == 0.0:
        return 0.0 if float(exponent) > 0 else math.inf
    return b ** float(exponent)


def index_power(k: int, s: Number) -> Number:
    """``k ** -s`` for a positive integer index ``k`` and ``s >= 0``."""
    if is_rational(s) and Fraction(s).denominator == 1:
        return Fraction(1, k ** int(s)) if s else 1
    if k > _FLOAT_SAFE:
        return math.exp(-float(s) * math.log(k))
    return k ** -float(s)


def log_of(x: Number) -> float:
    """Natural log of a positive int, Fraction or float; big ints allowed."""
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def iroot(x: int, n: int) -> int:
    """Largest integer ``r`` with ``r ** n <= x`` for ``x >= 0``."""
    if x < 0:
        raise ValueError("negative radicand")
    if n == 1 or x < 2:
        return x
    if n == 2:
        return math.isqrt(x)
    # float seed, then exact Newton from above
    try:
        r = int(round(x ** (1.0 / n))) + 1
    except OverflowError:
        r = 1 << (x.bit_length() // n + 1)
    while True:
        y = ((n - 1) * r + x // r ** (n - 1)) // n
        if y >= r:
            break
        r = y
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def ceil_sqrt(x: int) -> int:
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def ceil_exact(x: Number) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return -((-x.numerator) // x.denominator)
    return math.ceil(x)


def floor_exact(x: Number) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    return math.floor(x)


def to_float(x: Number) -> float:
    try:
        return float(x)
    except OverflowError:
        return math.inf


def fmt(x) -> str:
    """Serialize a number for CSV output: exact ints as decimal strings,
    everything else with 17 significant digits."""
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else format(to_float(x), ".17g")
    return format(float(x), ".17g")
