"""Closed-form descriptions of k -> q_k on one branch of a model.

A profile answers three questions without touching every index:

* ``value(k)``: the exact (or float, when irrational) value at k;
* ``cut(level)``: the integer interval of k >= 1 where ``value(k) >= level``;
* ``power_sum_bounds(a, b, p)``: certified bounds on sum_{k=a..b} value(k)**p.

Cuts are located from a float estimate and then settled by evaluating
``value`` itself with :func:`at_least`, so they agree bit for bit with
index-by-index enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from ._exact import Number, at_least, index_power, is_rational, power, to_float
from .errors import AnalyticSummationUnavailable

Cut = Optional[tuple[int, Optional[int]]]  # None = empty; (lo, None) = [lo, inf)

# direct summation below this many terms
DIRECT_SUM_LIMIT = 100_000
# relative widening applied to float closed forms
_ROUNDING = 1e-12


def _last_true(pred: Callable[[int], bool], guess: int) -> int:
    """Largest K >= 1 with pred(K) for pred true-then-false; 0 if pred(1) fails."""
    if not pred(1):
        return 0
    lo = max(1, guess)
    if pred(lo):
        step = 1
        hi = lo + step
        while pred(hi):
            lo = hi
            step *= 2
            hi = lo + step
    else:
        hi = lo
        step = 1
        lo = max(1, hi - step)
        while not pred(lo):
            hi = lo
            step *= 2
            lo = max(1, hi - step)
    # pred(lo) true, pred(hi) false
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _first_true(pred: Callable[[int], bool], guess: int) -> int:
    """Smallest K >= 1 with pred(K) for pred false-then-true (pred must turn true)."""
    return _last_true(lambda k: not pred(k), max(guess - 1, 1)) + 1


def _guess(x: float) -> int:
    if not math.isfinite(x) or x > 1e300:
        return 2**62
    return max(1, int(x))


class Profile:
    def value(self, k: int) -> Number:
        raise NotImplementedError

    def cut(self, level: Number) -> Cut:
        raise NotImplementedError

    def power_sum_bounds(self, a: int, b: int, p: Number) -> tuple[float, float]:
        raise AnalyticSummationUnavailable(f"{self!r} has no closed-form power sums")

    def bounds_on(self, a: int, b: int) -> tuple[Number, Number]:
        """(min, max) of value over [a, b]; profiles are monotone."""
        va, vb = self.value(a), self.value(b)
        return (va, vb) if at_least(vb, va) else (vb, va)


@dataclass(frozen=True)
class Constant(Profile):
    v: Number

    def value(self, k):
        return self.v

    def cut(self, level):
        return (1, None) if at_least(self.v, level) else None

    def power_sum_bounds(self, a, b, p):
        if b < a:
            return 0.0, 0.0
        s = to_float(power(self.v, p) * (b - a + 1)) if self.v else 0.0
        return s, s


@dataclass(frozen=True)
class AffinePower(Profile):
    """c0 + c1 * scale * k ** -s with s > 0; monotone in k."""

    c0: Number
    c1: Number
    scale: Number
    s: Number

    def w(self, k: int) -> Number:
        return self.scale * index_power(k, self.s)

    def value(self, k):
        w = self.w(k)
        if self.c0 == 0 and self.c1 == 1:
            return w
        return self.c0 + self.c1 * w

    def cut(self, level):
        pred = lambda k: at_least(self.value(k), level)
        if self.c1 > 0:
            # decreasing towards c0
            if at_least(self.c0, level):
                return (1, None)
            t = (to_float(level) - to_float(self.c0)) / (to_float(self.c1) * to_float(self.scale))
            K = _last_true(pred, _guess(t ** (-1.0 / to_float(self.s))))
            return (1, K) if K >= 1 else None
        # increasing towards c0 without reaching it
        if not (at_least(self.c0, level) and self.c0 != level):
            return None
        if pred(1):
            return (1, None)
        t = (to_float(self.c0) - to_float(level)) / (-to_float(self.c1) * to_float(self.scale))
        return (_first_true(pred, _guess(t ** (-1.0 / to_float(self.s)))), None)

    def power_sum_bounds(self, a, b, p):
        if b < a:
            return 0.0, 0.0
        if self.c0 != 0 or self.c1 <= 0:
            raise AnalyticSummationUnavailable(
                f"power sums need a pure decreasing power profile, got {self!r}"
            )
        c = to_float(power(self.c1 * self.scale, p))
        t = to_float(self.s) * to_float(p)
        if b - a + 1 <= DIRECT_SUM_LIMIT:
            # each float power is within an ulp or two; the widening covers it
            s = c * math.fsum(np.arange(a, b + 1, dtype=float) ** -t)
            return s * (1 - _ROUNDING), s * (1 + _ROUNDING)
        lo = c * _power_integral(a, b + 1, t)
        hi = to_float(power(self.value(a), p)) + c * _power_integral(a, b, t)
        return lo * (1 - _ROUNDING), hi * (1 + _ROUNDING)


def _power_integral(a: int, b: int, t: float) -> float:
    """Integral of x ** -t over [a, b] for t > 0, a >= 1; safe for huge b."""
    if b <= a:
        return 0.0
    la, lb = math.log(a), math.log(b)
    if t == 1:
        return lb - la
    e = 1.0 - t
    # (b^e - a^e) / e computed through exp to survive big integers
    if e > 0:
        return math.exp(e * lb) * -math.expm1(e * (la - lb)) / e
    return math.exp(e * la) * -math.expm1(e * (lb - la)) / -e


@dataclass(frozen=True)
class Geometric(Profile):
    """q ** k for rational q in (0, 1)."""

    q: Number

    _EXACT_UPTO = 4096

    def value(self, k):
        if is_rational(self.q) and k <= self._EXACT_UPTO:
            return Fraction(self.q) ** k
        return math.exp(k * math.log(to_float(self.q)))

    def cut(self, level):
        pred = lambda k: at_least(self.value(k), level)
        lv = to_float(level)
        est = math.log(lv) / math.log(to_float(self.q)) if lv > 0 else math.inf
        K = _last_true(pred, _guess(est))
        return (1, K) if K >= 1 else None

    def power_sum_bounds(self, a, b, p):
        if b < a:
            return 0.0, 0.0
        r = to_float(self.q) ** to_float(p)
        n = b - a + 1
        first = math.exp(a * math.log(r)) if a < 10**15 else 0.0
        tail = -math.expm1(n * math.log(r)) if n < 10**15 else 1.0
        s = first * tail / (1 - r)
        return s * (1 - _ROUNDING), s * (1 + _ROUNDING)


def affine_power(c0, c1, scale, s) -> Profile:
    if c1 == 0 or scale == 0:
        return Constant(c0)
    return AffinePower(c0, c1, scale, s)


@dataclass(frozen=True)
class Quantity:
    """A per-index value k -> q_k with optional analytic structure.

    ``pieces`` lists ``(index_set, profile)`` per model branch in order; the
    final piece has ``index_set=None`` and covers every index not in an
    earlier set. Special sets are assumed pairwise disjoint. ``pieces`` is
    None when some branch has no closed form, and then only enumeration
    works.
    """

    value: Callable[[int], Number]
    pieces: Optional[Sequence[tuple[object, Profile]]] = None
    label: str = ""
