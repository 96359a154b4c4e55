"""Per-window exceedance counts, densities and Cesàro sums.

Two backends compute the same numbers:

* ``enumerated`` evaluates q_k for every index of every window;
* ``analytic`` intersects each window with the level cuts of the branch
  profiles and counts special indices with ``IndexSet.count``.

Counts from the two agree exactly because cuts are settled with the same
exact comparisons that enumeration uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Callable, Iterable, Optional, Sequence

from .._exact import Number, at_least, exact, power, to_float
from ..errors import (
    AnalyticCountingUnavailable,
    AnalyticSummationUnavailable,
    EmptyWindowRange,
    WindowTooLarge,
)
from ..profiles import Quantity
from ..windows import Window, WindowScheme

ENUM_LIMIT = 10**6
# largest merged span of overlapping windows held in memory at once
ENUM_SPAN_LIMIT = 2 * 10**7
# special members are summed one by one below this count
MEMBER_SUM_LIMIT = 100_000

BACKENDS = ("auto", "analytic", "enumerate")
MODES = ("probability", "cesaro", "expectation", "distribution", "realSequence")


@dataclass(frozen=True)
class OrderParams:
    gamma: Number = Fraction(1, 2)
    epsilon: Number = Fraction(1, 2)
    delta: Number = Fraction(1, 2)
    p: Number = 1
    r: Number = 1

    def __post_init__(self):
        for name in ("gamma", "epsilon", "delta", "p", "r"):
            object.__setattr__(self, name, exact(getattr(self, name)))
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")
        if not self.p > 0:
            raise ValueError(f"p must be > 0, got {self.p}")
        if not self.r > 0:
            raise ValueError(f"r must be > 0, got {self.r}")

    @property
    def gamma_f(self) -> float:
        return float(self.gamma)

    def with_(self, **changes) -> "OrderParams":
        vals = {k: getattr(self, k) for k in ("gamma", "epsilon", "delta", "p", "r")}
        vals.update(changes)
        return OrderParams(**vals)

    def describe(self) -> dict:
        return {k: _cfg(getattr(self, k)) for k in ("gamma", "epsilon", "delta", "p", "r")}


def _cfg(x):
    return x if isinstance(x, (int, float)) else str(x)


@dataclass(frozen=True)
class WindowRecord:
    n: int
    window: Window
    count: Optional[int]
    density: Optional[float]
    cesaro_lo: Optional[float] = None
    cesaro_hi: Optional[float] = None
    backend: str = "enumerated"

    @property
    def width(self) -> int:
        return self.window.width


@dataclass(frozen=True)
class DiagnosticSeries:
    mode: str
    records: tuple[WindowRecord, ...]
    params: OrderParams
    level: Number
    candidate_limit: object = None
    scheme_name: str = ""
    label: str = ""
    x: Optional[Number] = None

    def __len__(self) -> int:
        return len(self.records)

    @property
    def ns(self) -> list[int]:
        return [rec.n for rec in self.records]

    @property
    def counts(self) -> list[int]:
        return [rec.count for rec in self.records]

    @property
    def densities(self) -> list[float]:
        return [rec.density for rec in self.records]

    def upper(self) -> list[float]:
        """The statistic driving the convergence test."""
        if self.mode == "cesaro":
            return [rec.cesaro_hi for rec in self.records]
        return self.densities

    def lower(self) -> list[float]:
        if self.mode == "cesaro":
            return [rec.cesaro_lo for rec in self.records]
        return self.densities

    def by_n(self) -> dict[int, WindowRecord]:
        return {rec.n: rec for rec in self.records}


# ---------------------------------------------------------------------------
# analytic backend


def _intersect(cut, lo: int, hi: int):
    if cut is None:
        return None
    a, b = cut
    a = max(a, lo)
    b = hi if b is None else min(b, hi)
    return (a, b) if a <= b else None


class _Analytic:
    def __init__(self, quantity: Quantity):
        if quantity.pieces is None:
            raise AnalyticCountingUnavailable(f"{quantity.label or 'quantity'}: some branch has no closed form")
        self.pieces = list(quantity.pieces)
        self.specials = [s for s, _ in self.pieces[:-1]]
        self._cuts: dict = {}

    def cuts(self, level):
        key = (type(level), level)
        if key not in self._cuts:
            self._cuts[key] = [prof.cut(level) for _, prof in self.pieces]
        return self._cuts[key]

    def count(self, lo: int, hi: int, level) -> int:
        cuts = self.cuts(level)
        total = 0
        for s, cut in zip(self.specials, cuts):
            part = _intersect(cut, lo, hi)
            if part:
                total += s.count(*part)
        part = _intersect(cuts[-1], lo, hi)
        if part:
            a, b = part
            total += (b - a + 1) - sum(s.count(a, b) for s in self.specials)
        return total

    def power_sum(self, lo: int, hi: int, p) -> tuple[float, float]:
        """Certified [low, high] for the sum of q_k ** p over [lo, hi]."""
        low = high = 0.0
        default = self.pieces[-1][1]
        d_lo, d_hi = default.power_sum_bounds(lo, hi, p)
        m_lo = m_hi = 0.0  # default-profile sum over special members, to subtract
        for s, prof in self.pieces[:-1]:
            n_members = s.count(lo, hi)
            if n_members == 0:
                continue
            if n_members <= MEMBER_SUM_LIMIT:
                members = list(s.members(lo, hi))
                own = math.fsum(to_float(power(prof.value(k), p)) for k in members)
                dflt = math.fsum(to_float(power(default.value(k), p)) for k in members)
                low += own
                high += own
                m_lo += dflt
                m_hi += dflt
            else:
                own_lo, own_hi = _member_sum_bounds(prof, lo, hi, n_members, p)
                df_lo, df_hi = _member_sum_bounds(default, lo, hi, n_members, p)
                low += own_lo
                high += own_hi
                m_lo += df_lo
                m_hi += df_hi
        low += d_lo - m_hi
        high += d_hi - m_lo
        return max(low, 0.0), max(high, 0.0)


def _member_sum_bounds(prof, lo: int, hi: int, m: int, p) -> tuple[float, float]:
    """Bounds on the sum of prof(k) ** p over m unknown members of [lo, hi].

    For a monotone profile the sum lies between the sums over the first m
    and the last m indices of the range.
    """
    try:
        first = prof.power_sum_bounds(lo, lo + m - 1, p)
        last = prof.power_sum_bounds(hi - m + 1, hi, p)
    except AnalyticSummationUnavailable:
        a, b = prof.bounds_on(lo, hi)
        return m * to_float(power(a, p)), m * to_float(power(b, p))
    return min(first[0], last[0]), max(first[1], last[1])


# ---------------------------------------------------------------------------
# enumeration backend


def _groups(windows: Sequence[Window]) -> list[tuple[int, int, list[Window]]]:
    """Merge overlapping windows into spans evaluated once."""
    groups: list[tuple[int, int, list[Window]]] = []
    for w in sorted(windows, key=lambda w: (w.lo, w.hi)):
        if groups and w.lo <= groups[-1][1]:
            lo, hi, ws = groups[-1]
            groups[-1] = (lo, max(hi, w.hi), ws + [w])
        else:
            groups.append((w.lo, w.hi, [w]))
    return groups


def _enumerate(
    value: Callable[[int], Number],
    windows: Sequence[Window],
    levels: Sequence[Number],
    p=None,
) -> dict[int, tuple[list[int], Optional[float]]]:
    """For each window n: (counts per level, sum of q_k ** p or None)."""
    out = {}
    for lo, hi, ws in _groups(windows):
        span = hi - lo + 1
        if span > ENUM_SPAN_LIMIT:
            raise WindowTooLarge(ws[0].n, span, ENUM_SPAN_LIMIT)
        vals = [value(k) for k in range(lo, hi + 1)]
        prefixes = [[0, *accumulate(1 if at_least(v, lv) else 0 for v in vals)] for lv in levels]
        powered = [to_float(power(v, p)) for v in vals] if p is not None else None
        for w in ws:
            i, j = w.lo - lo, w.hi - lo + 1
            counts = [pre[j] - pre[i] for pre in prefixes]
            total = math.fsum(powered[i:j]) if powered is not None else None
            out[w.n] = (counts, total)
    return out


# ---------------------------------------------------------------------------


def _resolve_windows(scheme: WindowScheme, ns: Iterable[int]) -> list[Window]:
    ns = list(ns)
    if not ns:
        raise EmptyWindowRange("empty n range")
    return scheme.windows(ns)


def _choose(backend: str, quantity: Quantity, windows: Sequence[Window], enum_limit: int, need_sums: bool):
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "enumerate":
        return "enumerated"
    has_closed = quantity.pieces is not None
    if has_closed and need_sums:
        try:
            quantity.pieces[-1][1].power_sum_bounds(1, 1, 1)
        except AnalyticSummationUnavailable:
            has_closed = False
    if backend == "analytic":
        if quantity.pieces is None:
            raise AnalyticCountingUnavailable(f"{quantity.label}: some branch has no closed form")
        return "analytic"
    if has_closed:
        return "analytic"
    widest = max(windows, key=lambda w: w.width)
    if widest.width > enum_limit:
        if need_sums and quantity.pieces is not None:
            raise AnalyticSummationUnavailable(
                f"window n={widest.n} has width {widest.width} > {enum_limit} and no closed-form sums"
            )
        raise AnalyticCountingUnavailable(
            f"window n={widest.n} has width {widest.width} > {enum_limit} and some branch has no closed form"
        )
    return "enumerated"


def level_series(
    quantity: Quantity,
    scheme: WindowScheme,
    gamma,
    level,
    ns: Iterable[int],
    *,
    p=None,
    mode: str = "probability",
    params: Optional[OrderParams] = None,
    candidate_limit=None,
    backend: str = "auto",
    enum_limit: int = ENUM_LIMIT,
    x=None,
) -> DiagnosticSeries:
    """Density of {k in window : q_k >= level}; with ``p``, also the Cesàro sums."""
    windows = _resolve_windows(scheme, ns)
    level = exact(level)
    g = float(gamma)
    used = _choose(backend, quantity, windows, enum_limit, p is not None)
    records = []
    if used == "analytic":
        an = _Analytic(quantity)
        for w in windows:
            c = an.count(w.lo, w.hi, level)
            lo = hi = None
            if p is not None:
                s_lo, s_hi = an.power_sum(w.lo, w.hi, p)
                hg = w.hgamma(g)
                lo, hi = s_lo / hg, s_hi / hg
            records.append(WindowRecord(w.n, w, c, w.density(c, g), lo, hi, "analytic"))
    else:
        res = _enumerate(quantity.value, windows, [level], p)
        for w in windows:
            (c,), total = res[w.n]
            ces = None if total is None else total / w.hgamma(g)
            records.append(WindowRecord(w.n, w, c, w.density(c, g), ces, ces, "enumerated"))
    if params is None:
        params = OrderParams(gamma=gamma)
    return DiagnosticSeries(
        mode, tuple(records), params, level, candidate_limit, scheme.name, quantity.label, x
    )


def density_series(model, scheme: WindowScheme, params: OrderParams, ns, **kw) -> DiagnosticSeries:
    """Probability mode: density of {k : P(|X_k - X| >= eps) >= delta}."""
    q = model.exceedance_quantity(params.epsilon)
    return level_series(q, scheme, params.gamma, params.delta, ns, mode="probability",
                        params=params, candidate_limit=model.candidate_limit, **kw)


def cesaro_series(model, scheme: WindowScheme, params: OrderParams, ns, **kw) -> DiagnosticSeries:
    """Strong p-Cesàro mode: sum of P(|X_k - X| >= eps) ** p over the window / h ** gamma.

    Records also carry the probability-mode count at (eps, delta).
    """
    q = model.exceedance_quantity(params.epsilon)
    return level_series(q, scheme, params.gamma, params.delta, ns, p=params.p, mode="cesaro",
                        params=params, candidate_limit=model.candidate_limit, **kw)


def moment_series(model, scheme: WindowScheme, params: OrderParams, ns, **kw) -> DiagnosticSeries:
    """Expectation mode: density of {k : E|X_k - X|^r >= eps}."""
    q = model.moment_quantity(params.r)
    return level_series(q, scheme, params.gamma, params.epsilon, ns, mode="expectation",
                        params=params, candidate_limit=model.candidate_limit, **kw)


def real_stat_density(seq, scheme: WindowScheme, gamma, delta, ns, **kw) -> DiagnosticSeries:
    """Density of {k : a_k >= delta} for a real sequence a_k (callable or Quantity)."""
    q = seq if isinstance(seq, Quantity) else Quantity(seq, None, "a_k")
    kw.setdefault("params", OrderParams(gamma=gamma, delta=delta))
    kw.setdefault("mode", "realSequence")
    return level_series(q, scheme, gamma, delta, ns, **kw)
