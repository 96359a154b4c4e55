"""Finite-horizon convergence decisions from a diagnostic series."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

TAU = 0.05
TAIL_FRACTION = 0.5
DEAD_BAND = 1e-6
# share of sign changes among consecutive tail differences that counts as oscillation
OSCILLATION_SHARE = 0.5


@dataclass(frozen=True)
class Verdict:
    mode: str
    candidate_limit: object
    tail_max: float
    tail_min: float
    tail_trend: str
    decision: str
    horizon_used: int
    tau: float
    tail_fraction: float
    slope: float
    tail_ns: tuple[int, ...]

    def to_json(self) -> dict:
        d = asdict(self)
        d["candidate_limit"] = _jsonable(self.candidate_limit)
        d["tail_ns"] = list(self.tail_ns)
        return d

    def __str__(self) -> str:
        target = f" {self.candidate_limit}" if self.decision == "convergesTo" else ""
        return (f"{self.mode}: {self.decision}{target} (tail max {self.tail_max:.6g}, "
                f"min {self.tail_min:.6g}, trend {self.tail_trend}, n <= {self.horizon_used})")


def _jsonable(x):
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    if n < 2:
        return 0.0
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return 0.0
    return math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def trend(xs: Sequence[float], ys: Sequence[float], dead_band: float = DEAD_BAND) -> tuple[str, float]:
    s = slope(xs, ys)
    diffs = [b - a for a, b in zip(ys, ys[1:]) if abs(b - a) > dead_band]
    if len(diffs) >= 3:
        changes = sum(1 for a, b in zip(diffs, diffs[1:]) if (a > 0) != (b > 0))
        if changes >= OSCILLATION_SHARE * (len(diffs) - 1):
            return "oscillating", s
    if s > dead_band:
        return "increasing", s
    if s < -dead_band:
        return "decreasing", s
    return "flat", s


def decide(ns: Sequence[int], upper: Sequence[float], lower: Sequence[float], *, mode: str,
           candidate_limit=None, tau: float = TAU, tail_fraction: float = TAIL_FRACTION) -> Verdict:
    if not ns:
        raise ValueError("cannot judge an empty series")
    if tau <= 0 or not 0 < tail_fraction <= 1:
        raise ValueError("need tau > 0 and 0 < tail_fraction <= 1")
    m = max(1, math.ceil(len(ns) * tail_fraction))
    t_ns, t_up, t_lo = list(ns[-m:]), list(upper[-m:]), list(lower[-m:])
    mid = [(a + b) / 2 for a, b in zip(t_lo, t_up)]
    tr, s = trend([float(n) for n in t_ns], mid)
    tail_max, tail_min = max(t_up), min(t_lo)
    if tail_max < tau and tr in ("decreasing", "flat"):
        decision = "convergesTo"
    elif tail_min > tau and (tr != "decreasing" or t_lo[-1] + s * float(t_ns[-1] - t_ns[0]) > tau):
        # a slow decrease that would stay above tau for another tail length still fails
        decision = "fails"
    else:
        decision = "inconclusive"
    return Verdict(mode, candidate_limit, tail_max, tail_min, tr, decision, t_ns[-1], tau, tail_fraction, s,
                   tuple(t_ns))


def verdict(series, tau: float = TAU, tail_fraction: float = TAIL_FRACTION) -> Verdict:
    """Decision from the last ``tail_fraction`` of a DiagnosticSeries.

    convergesTo: tail max < tau and the tail is decreasing or flat.
    fails: tail min > tau and the tail is not decreasing, or decreases so
    slowly that its fitted line stays above tau for one more tail length.
    Cesàro series use the upper bound for the first test and the lower
    bound for the second.
    """
    return decide(series.ns, series.upper(), series.lower(), mode=series.mode,
                  candidate_limit=series.candidate_limit, tau=tau, tail_fraction=tail_fraction)


def combine(verdicts: Sequence[Verdict], mode: str = "distribution") -> Optional[Verdict]:
    """All grid points converge -> convergesTo; any fails -> fails; else inconclusive."""
    if not verdicts:
        return None
    worst = max(verdicts, key=lambda v: v.tail_max)
    if all(v.decision == "convergesTo" for v in verdicts):
        decision = "convergesTo"
    elif any(v.decision == "fails" for v in verdicts):
        decision = "fails"
        worst = next(v for v in verdicts if v.decision == "fails")
    else:
        decision = "inconclusive"
    return Verdict(mode, worst.candidate_limit, max(v.tail_max for v in verdicts),
                   min(v.tail_min for v in verdicts), worst.tail_trend, decision, worst.horizon_used,
                   worst.tau, worst.tail_fraction, worst.slope, worst.tail_ns)
