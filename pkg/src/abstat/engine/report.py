"""All four modes side by side, with the pointwise Markov certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .._exact import power, to_float
from ..errors import AbstatError
from .distribution import cdf_density_series
from .series import DiagnosticSeries, OrderParams, cesaro_series, density_series, moment_series
from .verdict import TAIL_FRACTION, TAU, Verdict, combine, verdict

# float slack when comparing independently rounded sums
REL_SLACK = 1e-12


@dataclass(frozen=True)
class BoundCheck:
    n: int
    lhs: float
    rhs: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs * (1 + REL_SLACK) + REL_SLACK


@dataclass
class ModeReport:
    verdicts: dict[str, Optional[Verdict]] = field(default_factory=dict)
    unavailable: dict[str, str] = field(default_factory=dict)
    series: dict[str, list[DiagnosticSeries]] = field(default_factory=dict)
    markov: list[BoundCheck] = field(default_factory=list)
    reverse: list[BoundCheck] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return all(c.ok for c in self.markov) and all(c.ok for c in self.reverse)

    def lines(self) -> list[str]:
        out = []
        for mode in ("probability", "cesaro", "expectation", "distribution"):
            v = self.verdicts.get(mode)
            out.append(str(v) if v is not None else f"{mode}: unavailable ({self.unavailable.get(mode, '')})")
        if self.markov:
            bad = [c.n for c in self.markov if not c.ok]
            out.append(f"markov d_n <= cesaro_n / delta^p: {'ok' if not bad else 'violated at n=' + str(bad[:5])}"
                       f" on {len(self.markov)} windows")
        if self.reverse:
            bad = [c.n for c in self.reverse if not c.ok]
            out.append(f"gamma=1 reverse cesaro_n <= delta^p + d_n: {'ok' if not bad else 'violated at n=' + str(bad[:5])}"
                       f" on {len(self.reverse)} windows")
        return out


def markov_checks(ces: DiagnosticSeries) -> list[BoundCheck]:
    dp = to_float(power(ces.params.delta, ces.params.p))
    return [BoundCheck(r.n, r.density, r.cesaro_hi / dp) for r in ces.records]


def reverse_checks(ces: DiagnosticSeries) -> list[BoundCheck]:
    """Only meaningful at gamma = 1."""
    dp = to_float(power(ces.params.delta, ces.params.p))
    return [BoundCheck(r.n, r.cesaro_lo, dp * r.width / r.window.hgamma(1.0) + r.density) for r in ces.records]


def compare_modes(model, scheme, params: OrderParams, ns: Sequence[int], x_grid=None, *,
                  tau: float = TAU, tail_fraction: float = TAIL_FRACTION, backend: str = "auto") -> ModeReport:
    ns = list(ns)
    rep = ModeReport()

    def attempt(mode, fn):
        try:
            got = fn()
        except AbstatError as exc:
            rep.verdicts[mode] = None
            rep.unavailable[mode] = f"{type(exc).__name__}: {exc}"
            return None
        rep.series[mode] = got if isinstance(got, list) else [got]
        return got

    prob = attempt("probability", lambda: density_series(model, scheme, params, ns, backend=backend))
    if prob is not None:
        rep.verdicts["probability"] = verdict(prob, tau, tail_fraction)
    ces = attempt("cesaro", lambda: cesaro_series(model, scheme, params, ns, backend=backend))
    if ces is not None:
        rep.verdicts["cesaro"] = verdict(ces, tau, tail_fraction)
        rep.markov = markov_checks(ces)
        if params.gamma == 1:
            rep.reverse = reverse_checks(ces)
    mom = attempt("expectation", lambda: moment_series(model, scheme, params, ns, backend=backend))
    if mom is not None:
        rep.verdicts["expectation"] = verdict(mom, tau, tail_fraction)
    dist = attempt("distribution", lambda: cdf_density_series(model, scheme, params, x_grid, ns, backend=backend))
    if dist is not None:
        rep.verdicts["distribution"] = combine([verdict(s, tau, tail_fraction) for s in dist])
    return rep
