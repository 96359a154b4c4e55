"""Index families that can be counted over huge ranges without enumeration."""

from __future__ import annotations

import math
from bisect import bisect_right
from fractions import Fraction
from functools import cached_property
from itertools import accumulate
from typing import Iterator, Sequence

from ._exact import exact, iroot


class IndexSet:
    """A set of positive integers with exact membership and range counting."""

    kind = "abstract"

    def contains(self, k: int) -> bool:
        raise NotImplementedError

    def count_upto(self, x: int) -> int:
        """Number of members in [1, x]."""
        raise NotImplementedError

    def count(self, lo: int, hi: int) -> int:
        """Number of members in [lo, hi] (countInRange)."""
        lo = max(lo, 1)
        if hi < lo:
            return 0
        return self.count_upto(hi) - self.count_upto(lo - 1)

    def members(self, lo: int, hi: int) -> Iterator[int]:
        """Members of [lo, hi] in increasing order."""
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}

    def __contains__(self, k: int) -> bool:
        return self.contains(k)

    def __repr__(self) -> str:
        return f"IndexSet({self.describe()})"


class Empty(IndexSet):
    kind = "none"

    def contains(self, k):
        return False

    def count_upto(self, x):
        return 0

    def members(self, lo, hi):
        return iter(())


class PerfectSquares(IndexSet):
    kind = "perfectSquares"

    def contains(self, k):
        if k < 1:
            return False
        r = math.isqrt(k)
        return r * r == k

    def count_upto(self, x):
        return math.isqrt(x) if x > 0 else 0

    def members(self, lo, hi):
        m = max(1, math.isqrt(max(lo, 1) - 1) + 1)
        while m * m <= hi:
            if m * m >= lo:
                yield m * m
            m += 1


class FloorPowers(IndexSet):
    """{ floor(m ** (1/c)) : m >= 1 } for rational c in (0, 1)."""

    kind = "floorPowers"

    def __init__(self, c):
        c = Fraction(exact(c))
        if not 0 < c < 1:
            raise ValueError(f"floorPowers needs 0 < c < 1, got {c}")
        self.c = c
        self._a, self._b = c.numerator, c.denominator

    def value(self, m: int) -> int:
        # floor(m ** (b/a)) = a-th integer root of m ** b
        return iroot(m**self._b, self._a)

    def count_upto(self, x):
        # floor(m^(1/c)) <= x  <=>  m^b < (x+1)^a; gaps between values are >= 1
        if x < 1:
            return 0
        return iroot((x + 1) ** self._a - 1, self._b)

    def contains(self, k):
        if k < 1:
            return False
        m = self.count_upto(k)
        return m >= 1 and self.value(m) == k

    def members(self, lo, hi):
        m = self.count_upto(lo - 1) + 1
        while True:
            v = self.value(m)
            if v > hi:
                return
            yield v
            m += 1

    def describe(self):
        return {"kind": self.kind, "c": str(self.c)}


class _SparseSequence(IndexSet):
    """Members generated in increasing order; fine when they grow fast."""

    def _values(self) -> Iterator[int]:
        raise NotImplementedError

    def count_upto(self, x):
        n = 0
        for v in self._values():
            if v > x:
                break
            n += 1
        return n

    def contains(self, k):
        for v in self._values():
            if v >= k:
                return v == k
        return False

    def members(self, lo, hi):
        for v in self._values():
            if v > hi:
                return
            if v >= lo:
                yield v


class SelfPowers(_SparseSequence):
    """{ m ** m : m >= 1 }."""

    kind = "selfPowers"

    def _values(self):
        m = 1
        while True:
            yield m**m
            m += 1


class FactorialPoints(_SparseSequence):
    """{ m! : m >= min_m }, duplicates (0! = 1!) removed."""

    kind = "factorialPoints"

    def __init__(self, min_m: int = 1):
        self.min_m = max(int(min_m), 1)

    def _values(self):
        m = self.min_m
        f = math.factorial(m)
        while True:
            yield f
            m += 1
            f *= m

    def describe(self):
        return {"kind": self.kind, "min_m": self.min_m}


class BlockUnion(IndexSet):
    """Union of disjoint integer intervals [lo, hi]."""

    kind = "blockUnion"

    def __init__(self, blocks: Sequence[tuple[int, int]]):
        blocks = sorted((int(a), int(b)) for a, b in blocks)
        for a, b in blocks:
            if b < a or a < 1:
                raise ValueError(f"bad block [{a}, {b}]")
        for (a0, b0), (a1, b1) in zip(blocks, blocks[1:]):
            if a1 <= b0:
                raise ValueError(f"blocks [{a0}, {b0}] and [{a1}, {b1}] overlap")
        self.blocks = tuple(blocks)
        self._los = [a for a, _ in blocks]
        self._his = [b for _, b in blocks]
        self._before = [0] + list(accumulate(b - a + 1 for a, b in blocks))

    def count_upto(self, x):
        i = bisect_right(self._los, x) - 1
        if i < 0:
            return 0
        return self._before[i] + min(x, self._his[i]) - self._los[i] + 1

    def contains(self, k):
        i = bisect_right(self._los, k) - 1
        return i >= 0 and k <= self._his[i]

    def members(self, lo, hi):
        i = max(bisect_right(self._los, lo) - 1, 0)
        for a, b in self.blocks[i:]:
            if a > hi:
                return
            yield from range(max(a, lo), min(b, hi) + 1)

    def describe(self):
        return {"kind": self.kind, "blocks": [[a, b] for a, b in self.blocks]}


class FirstOfEachWindow(IndexSet):
    """The first floor(h_r ** c) integers of every window r of a scheme.

    Defined for r up to the scheme horizon; windows must not overlap.
    """

    kind = "firstOfEachWindow"

    def __init__(self, scheme, c):
        c = Fraction(exact(c))
        if not 0 < c < 1:
            raise ValueError(f"firstOfEachWindow needs 0 < c < 1, got {c}")
        self.scheme = scheme
        self.c = c

    def head_size(self, width: int) -> int:
        # floor(width ** (a/b)) = b-th integer root of width ** a
        return iroot(width**self.c.numerator, self.c.denominator)

    @cached_property
    def _blocks(self) -> BlockUnion:
        blocks = []
        for r in range(1, self.scheme.horizon + 1):
            w = self.scheme.window(r)
            m = self.head_size(int(w.h)) if isinstance(w.h, int) else self.head_size(w.width)
            if m >= 1:
                blocks.append((w.lo, w.lo + m - 1))
        return BlockUnion(blocks)

    def contains(self, k):
        return self._blocks.contains(k)

    def count_upto(self, x):
        return self._blocks.count_upto(x)

    def members(self, lo, hi):
        return self._blocks.members(lo, hi)

    def describe(self):
        return {"kind": self.kind, "scheme": self.scheme.describe(), "c": str(self.c)}


def index_set_from_config(cfg) -> IndexSet:
    from .windows import scheme_from_config

    if cfg is None:
        return Empty()
    kind = cfg["kind"]
    if kind == "none":
        return Empty()
    if kind == "perfectSquares":
        return PerfectSquares()
    if kind == "floorPowers":
        return FloorPowers(cfg["c"])
    if kind == "selfPowers":
        return SelfPowers()
    if kind == "factorialPoints":
        return FactorialPoints(cfg.get("min_m", 1))
    if kind == "blockUnion":
        return BlockUnion([tuple(exact(v) for v in b) for b in cfg["blocks"]])
    if kind == "firstOfEachWindow":
        return FirstOfEachWindow(scheme_from_config(cfg["scheme"]), cfg["c"])
    raise ValueError(f"unknown index set kind {kind!r}")
