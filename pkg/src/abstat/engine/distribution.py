"""Distribution mode and statistical limsup/liminf of order gamma."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .._exact import Number, exact, to_float
from ..errors import EmptyWindowRange, GridHitsDiscontinuity, WindowTooLarge
from ..windows import WindowScheme
from .series import ENUM_SPAN_LIMIT, DiagnosticSeries, OrderParams, _groups, _resolve_windows, level_series

JUMP_TOL = 1e-9


def continuity_grid(limit) -> list[Number]:
    """Midpoints between consecutive atoms of the limit law plus one point beyond each end."""
    atoms = sorted(limit.support)
    mids = [(a + b) / 2 if isinstance(a + b, float) else exact(Fraction(a + b) / 2) for a, b in zip(atoms, atoms[1:])]
    return [atoms[0] - 1, *mids, atoms[-1] + 1]


def check_continuity(limit, x) -> None:
    for v, p in limit.atoms:
        if p and abs(to_float(x) - to_float(v)) <= JUMP_TOL:
            raise GridHitsDiscontinuity(x, p)


def cdf_density_series(model, scheme: WindowScheme, params: OrderParams, x_grid: Optional[Sequence] = None,
                       ns: Iterable[int] = (), **kw) -> list[DiagnosticSeries]:
    """One series per grid point x: density of {k : |F_k(x) - F(x)| >= delta}."""
    if x_grid is None:
        x_grid = continuity_grid(model.limit)
    ns = list(ns)
    out = []
    for x in x_grid:
        x = exact(x)
        check_continuity(model.limit, x)
        q = model.cdf_gap_quantity(x)
        out.append(level_series(q, scheme, params.gamma, params.delta, ns, mode="distribution",
                                params=params, candidate_limit=model.candidate_limit, x=x, **kw))
    return out


def _window_values(seq: Callable[[int], Number], scheme: WindowScheme, ns) -> list[tuple[object, list]]:
    windows = _resolve_windows(scheme, ns)
    by_n = {}
    for lo, hi, ws in _groups(windows):
        if hi - lo + 1 > ENUM_SPAN_LIMIT:
            raise WindowTooLarge(ws[0].n, hi - lo + 1, ENUM_SPAN_LIMIT)
        vals = [seq(k) for k in range(lo, hi + 1)]
        for w in ws:
            by_n[w.n] = (w, vals[w.lo - lo:w.hi - lo + 1])
    return [by_n[w.n] for w in windows]


def _tail(items: list, tail_fraction: float) -> list:
    m = max(1, math.ceil(len(items) * tail_fraction))
    return items[-m:]


def _tail_density(wins, pred, gamma: float, tail_fraction: float) -> float:
    return max(w.density(sum(1 for v in vals if pred(v)), gamma) for w, vals in _tail(wins, tail_fraction))


def stat_lim_sup(seq: Callable[[int], Number], scheme: WindowScheme, gamma, eta=0.01, ns: Iterable[int] = (),
                 tail_fraction: float = 0.5) -> float:
    """Largest observed value b with tail density of {k : x_k >= b} at least eta.

    The tail density is the maximum over the last ``tail_fraction`` of the
    windows. Returns -inf when no observed value qualifies.
    """
    wins = _window_values(seq, scheme, ns)
    values = sorted({v for _, vals in wins for v in vals})
    if not values:
        raise EmptyWindowRange("no indices in the requested windows")
    g = float(gamma)
    ok = lambda b: _tail_density(wins, lambda v: v >= b, g, tail_fraction) >= eta
    # qualifying values form a prefix of the sorted list
    lo, hi = -1, len(values)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(values[mid]):
            lo = mid
        else:
            hi = mid
    return -math.inf if lo < 0 else values[lo]


def stat_lim_inf(seq: Callable[[int], Number], scheme: WindowScheme, gamma, eta=0.01, ns: Iterable[int] = (),
                 tail_fraction: float = 0.5) -> float:
    """Smallest observed value b with tail density of {k : x_k <= b} at least eta; +inf if none."""
    neg = stat_lim_sup(lambda k: -seq(k), scheme, gamma, eta, ns, tail_fraction)
    return -neg
