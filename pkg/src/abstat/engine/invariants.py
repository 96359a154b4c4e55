"""Pointwise inequalities that every computed series must satisfy.

Each check returns a list of :class:`Violation`; an empty list means the
inequality held at every window (or index) examined. Float sums are
compared with a relative slack of 1e-12; counts are compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .._exact import at_least, exact, floor_exact, power, to_float
from ..windows import WindowScheme, make_scheme
from .report import REL_SLACK, markov_checks, reverse_checks
from .series import OrderParams, cesaro_series, density_series, level_series


@dataclass(frozen=True)
class Violation:
    check: str
    model: str
    scheme: str
    params: dict
    n: int
    detail: str

    def __str__(self) -> str:
        return f"{self.check} violated: model={self.model} scheme={self.scheme} n={self.n} {self.params}: {self.detail}"


def _le(a: float, b: float) -> bool:
    return a <= b * (1 + REL_SLACK) + REL_SLACK


def _v(check, model, scheme, params, n, detail):
    return Violation(check, model.name, scheme.name, params.describe(), n, detail)


def check_gamma_monotone(model, scheme, params, ns, gammas=(0.3, 0.5, 0.8, 1), backend="enumerate"):
    """gamma1 <= gamma2 implies d_n(gamma1) >= d_n(gamma2)."""
    out = []
    gs = sorted(exact(g) for g in gammas)
    series = [density_series(model, scheme, params.with_(gamma=g), ns, backend=backend) for g in gs]
    for a, b, ga, gb in zip(series, series[1:], gs, gs[1:]):
        for ra, rb in zip(a.records, b.records):
            if ra.count != rb.count or ra.density < rb.density:
                out.append(_v("gamma-monotonicity", model, scheme, params, ra.n,
                              f"d(gamma={ga})={ra.density!r} < d(gamma={gb})={rb.density!r}"))
    return out


def check_delta_monotone(model, scheme, params, ns, deltas=("1/10", "1/4", "1/2", 1), backend="enumerate"):
    """delta1 <= delta2 implies count(delta1) >= count(delta2)."""
    out = []
    ds = sorted(exact(d) for d in deltas)
    series = [density_series(model, scheme, params.with_(delta=d), ns, backend=backend) for d in ds]
    for a, b, da, db in zip(series, series[1:], ds, ds[1:]):
        for ra, rb in zip(a.records, b.records):
            if ra.count < rb.count:
                out.append(_v("delta-monotonicity", model, scheme, params, ra.n,
                              f"count(delta={da})={ra.count} < count(delta={db})={rb.count}"))
    return out


def check_p_monotone(model, scheme, params, ns, ps=("1/2", 1, 2, 3), backend="enumerate"):
    """p < q implies cesaro_n(q) <= cesaro_n(p), since every p_k <= 1."""
    out = []
    pv = sorted(exact(p) for p in ps)
    series = [cesaro_series(model, scheme, params.with_(p=p), ns, backend=backend) for p in pv]
    for a, b, pa, pb in zip(series, series[1:], pv, pv[1:]):
        for ra, rb in zip(a.records, b.records):
            if not _le(rb.cesaro_lo, ra.cesaro_hi):
                out.append(_v("p-monotonicity", model, scheme, params, ra.n,
                              f"cesaro(p={pb})={rb.cesaro_lo!r} > cesaro(p={pa})={ra.cesaro_hi!r}"))
    return out


def check_markov(model, scheme, params, ns, backend="enumerate"):
    """delta^p * count <= sum p_k^p, i.e. d_n <= cesaro_n / delta^p."""
    ces = cesaro_series(model, scheme, params, ns, backend=backend)
    return [_v("markov", model, scheme, params, c.n, f"d_n={c.lhs!r} > cesaro_n/delta^p={c.rhs!r}")
            for c in markov_checks(ces) if not c.ok]


def check_reverse(model, scheme, params, ns, backend="enumerate"):
    """At gamma = 1: cesaro_n <= delta^p + d_n."""
    p1 = params.with_(gamma=1)
    ces = cesaro_series(model, scheme, p1, ns, backend=backend)
    return [_v("gamma1-reverse", model, scheme, p1, c.n, f"cesaro_n={c.lhs!r} > delta^p + d_n={c.rhs!r}")
            for c in reverse_checks(ces) if not c.ok]


def half_windows(scheme: WindowScheme) -> WindowScheme:
    """Sub-scheme [alpha_n, alpha_n + floor((beta_n - alpha_n) / 2)] inside every window."""
    fb = lambda n: scheme.alpha(n) + floor_exact(exact(scheme.beta(n) - scheme.alpha(n)) / 2)
    return make_scheme("custom", {"alpha": scheme.alpha, "beta": fb}, scheme.horizon)


def check_refinement(model, scheme, params, ns, backend="enumerate"):
    """window' in window and h^gamma <= C h'^gamma imply d'_n <= C d_n (C = 2^gamma here)."""
    out = []
    sub = half_windows(scheme)
    C = 2.0 ** params.gamma_f
    full = density_series(model, scheme, params, ns, backend=backend)
    part = density_series(model, sub, params, ns, backend=backend)
    for rf, rp in zip(full.records, part.records):
        g = params.gamma_f
        if not _le(rf.window.hgamma(g), C * rp.window.hgamma(g)):
            out.append(_v("refinement", model, scheme, params, rf.n, "hypothesis h^gamma <= C h'^gamma fails"))
        elif not _le(rp.density, C * rf.density):
            out.append(_v("refinement", model, scheme, params, rf.n,
                          f"d'_n={rp.density!r} > C*d_n={C * rf.density!r}"))
    return out


def check_chebyshev(model, scheme, params, ns, backend="enumerate"):
    """{k : E|X_k-X|^r >= delta eps^r} contains {k : P(|X_k-X| >= eps) >= delta}."""
    out = []
    prob = density_series(model, scheme, params, ns, backend=backend)
    level = params.delta * power(params.epsilon, params.r)
    mom = level_series(model.moment_quantity(params.r), scheme, params.gamma, level, ns, backend=backend,
                       mode="expectation", params=params)
    for rp, rm in zip(prob.records, mom.records):
        if rm.count < rp.count:
            out.append(_v("chebyshev", model, scheme, params, rp.n,
                          f"moment count {rm.count} at level {level} < probability count {rp.count}"))
    return out


def check_bounded_moment(model, scheme, params, ns):
    """|X_k - X| <= B_k implies E|X_k - X|^r <= B_k^r P(|X_k - X| >= eps) + eps^r, per index."""
    out = []
    if not model.limit.is_point:
        return out
    x = model.limit.point_value
    er = power(params.epsilon, params.r)
    for w in scheme.windows(ns):
        for k in range(w.lo, w.hi + 1):
            b = model.law_at(k).bound(k)
            if b is None:
                continue
            B = b + abs(x)
            lhs = model.moment(k, params.r)
            rhs = power(B, params.r) * model.exceedance(k, params.epsilon) + er
            if not at_least(rhs, lhs) and not _le(to_float(lhs), to_float(rhs)):
                out.append(_v("bounded-moment", model, scheme, params, w.n, f"k={k}: E={lhs} > {rhs}"))
    return out


CHECKS = {
    "gamma-monotonicity": check_gamma_monotone,
    "delta-monotonicity": check_delta_monotone,
    "p-monotonicity": check_p_monotone,
    "markov": check_markov,
    "gamma1-reverse": check_reverse,
    "refinement": check_refinement,
    "chebyshev": check_chebyshev,
    "bounded-moment": check_bounded_moment,
}


@dataclass
class InvariantReport:
    violations: list[Violation] = field(default_factory=list)
    runs: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def run_grid(models: Sequence, schemes: Sequence[tuple[WindowScheme, Iterable[int]]],
             param_combos: Sequence[OrderParams], checks: Iterable[str] = tuple(CHECKS),
             stop_on_first: bool = False) -> InvariantReport:
    rep = InvariantReport()
    for model in models:
        for scheme, ns in schemes:
            ns = list(ns)
            for params in param_combos:
                for name in checks:
                    found = CHECKS[name](model, scheme, params, ns)
                    rep.runs[name] = rep.runs.get(name, 0) + 1
                    rep.violations.extend(found)
                    if found and stop_on_first:
                        return rep
    return rep
