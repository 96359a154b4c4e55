"""Ready-made models, schemes and expected outcomes for the worked examples.

Each entry bundles one or more models (different limit bindings of the
same sequence), the window schemes with the n values to run, default
order parameters, and the decisions the engine is expected to reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from ._exact import exact, index_power
from .distributions import DiscreteDistribution as D
from .distributions import JointDistribution as J
from .engine import (
    DiagnosticSeries,
    OrderParams,
    Verdict,
    cdf_density_series,
    cesaro_series,
    combine,
    density_series,
    moment_series,
    verdict,
)
from .errors import UnknownId
from .indexsets import BlockUnion, FactorialPoints, FirstOfEachWindow, FloorPowers, PerfectSquares, SelfPowers
from .models import Branch, ClosedFormLaw, FixedLaw, IndexedLaw, JointLaw, RVSequenceModel, TwoPointLaw
from .profiles import AffinePower, Constant, Geometric, Quantity
from .windows import WindowScheme, construct_slow_ratio_blocks, make_scheme

IDS = ("ex2_1", "ex2_2", "ex2_3", "ex2_4", "thm2_4", "ex3_1", "ex4_1", "thm2_7")

HALF = Fraction(1, 2)
PLUS_MINUS_ONE = D.of({-1: HALF, 1: HALF})


@dataclass(frozen=True)
class SchemeRun:
    scheme: WindowScheme
    ns: tuple[int, ...]


@dataclass(frozen=True)
class Expectation:
    mode: str
    scheme: str
    decision: str
    limit: object
    params: OrderParams
    model: str = "default"
    backend: str = "auto"
    ns: Optional[tuple[int, ...]] = None
    x_grid: Optional[tuple] = None

    def describe(self) -> str:
        target = f" {self.limit}" if self.decision == "convergesTo" else ""
        return (f"{self.mode} [{self.scheme}, model={self.model}, gamma={self.params.gamma}]: "
                f"{self.decision}{target}")


@dataclass
class CorpusEntry:
    id: str
    models: dict[str, RVSequenceModel]
    schemes: dict[str, SchemeRun]
    default_params: OrderParams
    expected: list[Expectation]
    notes: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def model(self) -> RVSequenceModel:
        return self.models["default"]


@dataclass
class Outcome:
    expectation: Expectation
    verdict: Verdict
    series: list[DiagnosticSeries]

    @property
    def passed(self) -> bool:
        exp, got = self.expectation, self.verdict
        if got.decision != exp.decision:
            return False
        if exp.decision == "convergesTo" and exp.limit != "law":
            return got.candidate_limit == exp.limit
        return True

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.expectation.describe()} -> {self.verdict}"


def run_expectation(entry: CorpusEntry, exp: Expectation, tau: float = 0.05, tail_fraction: float = 0.5) -> Outcome:
    model = entry.models[exp.model]
    run = entry.schemes[exp.scheme]
    ns = exp.ns or run.ns
    if exp.mode == "probability":
        series = [density_series(model, run.scheme, exp.params, ns, backend=exp.backend)]
    elif exp.mode == "cesaro":
        series = [cesaro_series(model, run.scheme, exp.params, ns, backend=exp.backend)]
    elif exp.mode == "expectation":
        series = [moment_series(model, run.scheme, exp.params, ns, backend=exp.backend)]
    elif exp.mode == "distribution":
        series = cdf_density_series(model, run.scheme, exp.params, exp.x_grid, ns, backend=exp.backend)
    else:
        raise ValueError(f"unknown mode {exp.mode!r}")
    verdicts = [verdict(s, tau, tail_fraction) for s in series]
    v = verdicts[0] if len(verdicts) == 1 else combine(verdicts)
    return Outcome(exp, v, series)


def run(entry: CorpusEntry, tau: float = 0.05, tail_fraction: float = 0.5) -> list[Outcome]:
    return [run_expectation(entry, e, tau, tail_fraction) for e in entry.expected]


# ---------------------------------------------------------------------------
# entries


def _squares(horizon: int) -> WindowScheme:
    return make_scheme("squares", horizon=horizon)


def ex2_1(horizon: int = 5000, classical_horizon: int = 10_000) -> CorpusEntry:
    """Squares carry +-1 fairly; elsewhere P(X_k = 1) = 1/k, else 0; limit 0."""
    model = RVSequenceModel(
        (Branch(PerfectSquares(), FixedLaw(PLUS_MINUS_ONE), "squares"),
         Branch(None, TwoPointLaw(0, 1, 1, 1), "generic")),
        D.point(0), "ex2_1")
    params = OrderParams(HALF, HALF, HALF)
    schemes = {
        "squares": SchemeRun(_squares(horizon), tuple(range(1, horizon + 1))),
        "classical": SchemeRun(make_scheme("classical", horizon=classical_horizon),
                               tuple(range(1, classical_horizon + 1))),
    }
    expected = [
        Expectation("probability", "squares", "convergesTo", 0, params),
        Expectation("probability", "classical", "fails", 0, params),
    ]
    return CorpusEntry("ex2_1", {"default": model}, schemes, params, expected,
                       "separates the window scheme from the classical one at gamma = 1/2")


def ex2_2(c="1/2", j_max: int = 40, gammas=("0.3", "0.45", "0.5", "0.55", "0.8")) -> CorpusEntry:
    """Uniform(0, 1) at floor(m^(1/c)); elsewhere density n x^(n-1) / 2^n on (0, 2); limit 2.

    Only the exceedance probabilities are modelled: 1 on the special indices
    and (1 - eps/2)^k elsewhere, valid for 0 < eps < 1.
    """
    c = Fraction(exact(c))
    special = ClosedFormLaw(lambda eps: Constant(1), "uniform on (0, 1)")
    generic = ClosedFormLaw(lambda eps: Geometric(1 - Fraction(eps) / 2), "density n x^(n-1) / 2^n on (0, 2)")
    model = RVSequenceModel(
        (Branch(FloorPowers(c), special, "floor powers"), Branch(None, generic, "generic")),
        D.point(2), "ex2_2", eps_range=(0, 1))
    ns = tuple(10**j for j in range(1, j_max + 1))
    schemes = {"powerOfN(2)": SchemeRun(make_scheme("powerOfN", {"exponent": 2}, horizon=ns[-1]), ns)}
    base = OrderParams(HALF, HALF, HALF)
    expected = []
    for g in gammas:
        g = exact(g)
        decision = "convergesTo" if g > c else "fails"
        expected.append(Expectation("probability", "powerOfN(2)", decision, 2, base.with_(gamma=g)))
    return CorpusEntry("ex2_2", {"default": model}, schemes, base, expected,
                       f"verdict flips as gamma crosses c = {c}", {"c": c})


def _ex2_3_model(limit: int, horizon: int) -> RVSequenceModel:
    # odd blocks (2n+1)! < k < (2n+2)!; everything outside them and the endpoints is an even block
    odd = BlockUnion([(math.factorial(2 * n + 1) + 1, math.factorial(2 * n + 2) - 1) for n in range(1, horizon + 2)])
    return RVSequenceModel(
        (Branch(FactorialPoints(min_m=2), FixedLaw(D.of({-3: HALF, 3: HALF})), "endpoints"),
         Branch(odd, TwoPointLaw(2, -2, 1, 1), "odd blocks"),
         Branch(None, TwoPointLaw(1, -1, 1, 1), "even blocks")),
        D.point(limit), f"ex2_3[X={limit}]")


def ex2_3(horizon: int = 12) -> CorpusEntry:
    """+-1 / +-2 blocks between consecutive factorials, +-3 at the factorials."""
    params = OrderParams(HALF, HALF, HALF)
    ns = tuple(range(1, horizon + 1))
    schemes = {
        "evenFactorial": SchemeRun(make_scheme("factorialEven", horizon=horizon), ns),
        "oddFactorial": SchemeRun(make_scheme("factorialOdd", horizon=horizon), ns),
    }
    models = {"default": _ex2_3_model(1, horizon), "limit1": _ex2_3_model(1, horizon),
              "limit2": _ex2_3_model(2, horizon)}
    expected = [
        Expectation("probability", "evenFactorial", "convergesTo", 1, params, model="limit1"),
        Expectation("probability", "oddFactorial", "convergesTo", 2, params, model="limit2"),
        Expectation("probability", "evenFactorial", "fails", 2, params, model="limit2"),
        Expectation("probability", "oddFactorial", "fails", 1, params, model="limit1"),
    ]
    return CorpusEntry("ex2_3", models, schemes, params, expected,
                       "the limit depends on the window scheme; index 1 uses the even-block law")


def ex2_4(p=1, horizon: int = 2000, cesaro_horizon: int = 200) -> CorpusEntry:
    """+-1 at m^m; elsewhere P(X_k = 1) = k^(-1/(2p)), else 0; limit 0."""
    p = exact(p)
    model = RVSequenceModel(
        (Branch(SelfPowers(), FixedLaw(PLUS_MINUS_ONE), "self powers"),
         Branch(None, TwoPointLaw(0, 1, 1, Fraction(1) / (2 * p)), "generic")),
        D.point(0), "ex2_4", eps_range=(0, 1))
    params = OrderParams(HALF, HALF, HALF, p=p)
    schemes = {"powerOfN(2)": SchemeRun(make_scheme("powerOfN", {"exponent": 2}, horizon=horizon),
                                        tuple(range(1, horizon + 1)))}
    expected = [
        Expectation("probability", "powerOfN(2)", "convergesTo", 0, params),
        Expectation("cesaro", "powerOfN(2)", "fails", 0, params, backend="enumerate",
                    ns=tuple(range(1, cesaro_horizon + 1))),
        Expectation("cesaro", "powerOfN(2)", "fails", 0, params.with_(gamma="0.3"), backend="enumerate",
                    ns=tuple(range(1, cesaro_horizon + 1))),
    ]
    return CorpusEntry("ex2_4", {"default": model}, schemes, params, expected,
                       "statistically convergent but not strongly Cesàro summable for gamma <= 1/2")


def thm2_4(c="1/2", p=1, j_max: int = 30) -> CorpusEntry:
    """+-1 at floor(m^(1/c)); elsewhere P(X_k = 1) = k^(-2/p), else 0; limit 0."""
    c, p = Fraction(exact(c)), exact(p)
    model = RVSequenceModel(
        (Branch(FloorPowers(c), FixedLaw(PLUS_MINUS_ONE), "floor powers"),
         Branch(None, TwoPointLaw(0, 1, 1, Fraction(2) / p), "generic")),
        D.point(0), "thm2_4", eps_range=(0, 1))
    ns = tuple(10**j for j in range(1, j_max + 1))
    schemes = {"powerOfN(2)": SchemeRun(make_scheme("powerOfN", {"exponent": 2}, horizon=ns[-1]), ns)}
    params = OrderParams(HALF, HALF, HALF, p=p)
    expected = [
        Expectation("cesaro", "powerOfN(2)", "convergesTo", 0, params.with_(gamma="0.8")),
        Expectation("cesaro", "powerOfN(2)", "fails", 0, params.with_(gamma="0.3")),
    ]
    return CorpusEntry("thm2_4", {"default": model}, schemes, params, expected,
                       f"Cesàro summability of order gamma flips as gamma crosses c = {c}", {"c": c})


def _heavy_tail_law(r):
    """X_k = k with probability k^-r, else 0."""
    def law(k: int) -> D:
        w = index_power(k, r)
        return D(((0, 1 - w), (k, w)))

    def exceedance(eps, x):
        # |X_k| >= eps holds on {X_k = k} for every k >= 1 once eps <= 1
        return AffinePower(0, 1, 1, r) if x == 0 and eps <= 1 else None

    def moment(order, x):
        return Constant(1) if x == 0 and order == r else None

    return IndexedLaw(law, exceedance, moment, bound_fn=lambda k: k)


def ex3_1(r=1, horizon: int = 2000) -> CorpusEntry:
    """Squares take 0 or 1 fairly; elsewhere X_k = k with probability k^-r, else 0; limit 0."""
    r = exact(r)
    model = RVSequenceModel(
        (Branch(PerfectSquares(), FixedLaw(D.of({0: HALF, 1: HALF})), "squares"),
         Branch(None, _heavy_tail_law(r), "generic")),
        D.point(0), "ex3_1")
    params = OrderParams(HALF, HALF, HALF, r=r)
    schemes = {"squares": SchemeRun(_squares(horizon), tuple(range(1, horizon + 1)))}
    expected = [
        Expectation("probability", "squares", "convergesTo", 0, params),
        Expectation("expectation", "squares", "fails", 0, params.with_(epsilon="1/4")),
    ]
    return CorpusEntry("ex3_1", {"default": model}, schemes, params, expected,
                       "convergent in probability but not in r-th expectation")


EX4_1_HEAD = J.of([(-1, 1, HALF), (1, 0, HALF), (-1, 0, 0), (1, 1, 0)])
EX4_1_REST = J.of([(1, 0, HALF), (0, 1, HALF), (0, 0, 0), (1, 1, 0)])


def ex4_1(c="0.3", gamma="0.8", horizon: int = 10_000) -> CorpusEntry:
    """Joint laws of (X_k, X): one table on the first floor(h_r^c) indices of each window, another elsewhere."""
    c = Fraction(exact(c))
    scheme = _squares(horizon)
    head = FirstOfEachWindow(scheme, c)
    model = RVSequenceModel(
        (Branch(head, JointLaw(EX4_1_HEAD), "window heads"), Branch(None, JointLaw(EX4_1_REST), "rest")),
        D.of({0: HALF, 1: HALF}), "ex4_1")
    params = OrderParams(exact(gamma), HALF, HALF)
    grid = (Fraction(-1, 2), HALF, Fraction(3, 2))
    schemes = {"squares": SchemeRun(scheme, tuple(range(1, horizon + 1)))}
    expected = [
        Expectation("distribution", "squares", "convergesTo", "law", params, x_grid=grid),
        Expectation("probability", "squares", "fails", "law", params),
    ]
    y = Quantity(lambda k: HALF if head.contains(k) else 0, [(head, Constant(HALF)), (None, Constant(0))], "y_k")
    return CorpusEntry("ex4_1", {"default": model}, schemes, params, expected,
                       "convergent in distribution but not in probability", {"c": c, "y": y, "x_grid": grid})


def thm2_7(j_max: int = 7, horizon: int = 100_000, alpha: str = "n", beta: str = "n + ceil_sqrt(n)") -> CorpusEntry:
    """+-1 on greedily chosen windows of a unit-ratio scheme; elsewhere P(X_k = 1) = k^-2; limit 0."""
    scheme = make_scheme("custom", {"alpha": alpha, "beta": beta}, horizon)
    blocks = construct_slow_ratio_blocks(scheme, j_max)
    chosen = BlockUnion([(lo, hi) for _, lo, hi in blocks])
    model = RVSequenceModel(
        (Branch(chosen, FixedLaw(PLUS_MINUS_ONE), "selected windows"),
         Branch(None, TwoPointLaw(0, 1, 1, 2), "generic")),
        D.point(0), "thm2_7")
    params = OrderParams(HALF, HALF, HALF)
    rs = tuple(r for r, _, _ in blocks)
    schemes = {
        "classical": SchemeRun(make_scheme("classical", horizon=horizon), tuple(range(1, horizon + 1))),
        "slowRatio": SchemeRun(scheme, rs),
    }
    expected = [
        Expectation("probability", "classical", "convergesTo", 0, params.with_(gamma=1)),
        Expectation("probability", "slowRatio", "fails", 0, params),
    ]
    return CorpusEntry("thm2_7", {"default": model}, schemes, params, expected,
                       "classically convergent, but not along a scheme whose ratio tends to 1",
                       {"r": rs, "blocks": blocks})


_BUILDERS: dict[str, Callable[..., CorpusEntry]] = {
    "ex2_1": ex2_1, "ex2_2": ex2_2, "ex2_3": ex2_3, "ex2_4": ex2_4,
    "thm2_4": thm2_4, "ex3_1": ex3_1, "ex4_1": ex4_1, "thm2_7": thm2_7,
}


def build(id: str, **overrides) -> CorpusEntry:
    try:
        builder = _BUILDERS[id]
    except KeyError:
        raise UnknownId(f"unknown corpus id {id!r}; choose from {', '.join(IDS)}") from None
    return builder(**overrides)
