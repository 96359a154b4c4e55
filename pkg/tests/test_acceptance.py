"""Acceptance suite: one test per criterion, each checked against an independent oracle.

Run ``pytest tests/test_acceptance.py`` and read the "acceptance criteria"
section of the terminal summary for one PASS/FAIL line per criterion.
"""

import math
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from abstat import corpus
from abstat._exact import iroot
from abstat.cli import default_invariant_grid
from abstat.distributions import DiscreteDistribution
from abstat.engine import (OrderParams, cdf_density_series, cesaro_series, combine, density_series, level_series,
                           moment_series, run_grid, verdict)
from abstat.indexsets import (BlockUnion, Empty, FactorialPoints, FirstOfEachWindow, FloorPowers, PerfectSquares,
                              SelfPowers)
from abstat.models import Branch, FixedLaw, RVSequenceModel, TwoPointLaw
from abstat.montecarlo import MCConfig, estimate_exceedance, mc_density_series
from abstat.windows import liminf_ratio, make_scheme

HALF = Fraction(1, 2)
TAU = 0.05


def is_square(k):
    r = math.isqrt(k)
    return r * r == k


def atom_exceedance(model, k, eps):
    """P(|X_k - X| >= eps) from the atoms of X_k (or of the pair), no closed forms."""
    joint = model.law_at(k).joint(k)
    if joint is not None:
        return sum(p for a, b, p in joint.atoms if abs(a - b) >= eps)
    x = model.limit.point_value
    return sum(p for v, p in model.dist(k).atoms if abs(v - x) >= eps)


@pytest.mark.criterion(1, "squares scheme converges, classical scheme fails at gamma = 1/2")
def test_criterion_1_window_scheme_separation(criterion):
    t0 = time.perf_counter()
    e = corpus.build("ex2_1")
    params = OrderParams(HALF, HALF, HALF)

    sq = density_series(e.model, make_scheme("squares", horizon=5000), params, range(1, 5001))
    # oracle: k counts iff k is a square or 1/k >= 1/2
    for rec in sq.records:
        want = sum(1 for k in range(rec.window.lo, rec.window.hi + 1) if is_square(k) or k <= 2)
        assert rec.count == want
        if rec.n >= 3:
            assert rec.count == 1
            assert rec.density == pytest.approx(1 / math.sqrt(2 * rec.n - 1), rel=1e-15)
    # k = 2 sits exactly on the level 1/2, so window [2, 4] holds two indices
    assert sq.records[1].count == 2
    criterion.note("n=2 counts k=2 and k=4, count 1 for n >= 3")
    v = verdict(sq)
    assert sq.records[-1].density == pytest.approx(0.0100, abs=1e-4)
    assert v.tail_max < TAU and v.decision == "convergesTo" and v.candidate_limit == 0
    criterion.note(f"d_5000={sq.records[-1].density:.6f}, tail max {v.tail_max:.4f}")

    cl = density_series(e.model, make_scheme("classical", horizon=10**4), params, range(1, 10**4 + 1))
    running = 0
    for rec in cl.records:
        k = rec.n
        running += is_square(k) or k <= 2
        assert rec.count == running
        assert rec.density >= (math.sqrt(k) - 1) / math.sqrt(k)
    assert cl.records[-1].count == 101 and cl.records[-1].density == pytest.approx(1.01, rel=1e-15)
    assert verdict(cl).decision == "fails"
    elapsed = time.perf_counter() - t0
    criterion.note(f"{elapsed:.2f}s")
    assert elapsed < 10


@pytest.mark.criterion(2, "dual limits under even and odd factorial schemes")
def test_criterion_2_dual_limits(criterion):
    t0 = time.perf_counter()
    e = corpus.build("ex2_3")
    params = OrderParams(HALF, HALF, HALF)
    runs = [("evenFactorial", "limit1", 1), ("oddFactorial", "limit2", 2)]
    for scheme_name, binding, limit in runs:
        model = e.models[binding]
        scheme = e.schemes[scheme_name].scheme
        s = density_series(model, scheme, params, range(1, 13), backend="analytic")
        assert all(r.backend == "analytic" for r in s.records)
        for rec in s.records:
            if rec.n >= 2:
                assert rec.count == 2
            # the two endpoints over the log-domain window size
            assert rec.density == pytest.approx(math.exp(math.log(rec.count) - 0.5 * rec.window.log_h()), rel=1e-12)
        v = verdict(s)
        assert v.decision == "convergesTo" and v.candidate_limit == limit
        for rec in s.records[:3]:
            brute = sum(1 for k in range(rec.window.lo, rec.window.hi + 1)
                        if atom_exceedance(model, k, HALF) >= HALF)
            assert brute == rec.count
        criterion.note(f"{scheme_name}: {v.decision} {limit}")
    assert s.records[-1].window.hi == math.factorial(26)
    elapsed = time.perf_counter() - t0
    criterion.note(f"{elapsed:.2f}s")
    assert elapsed < 5


@pytest.mark.criterion(3, "probability converges while the Cesaro sum stays above 1")
def test_criterion_3_mode_separation(criterion):
    t0 = time.perf_counter()
    e = corpus.build("ex2_4")
    params = OrderParams(HALF, HALF, HALF, p=1)
    scheme = e.schemes["powerOfN(2)"].scheme
    prob = density_series(e.model, scheme, params, range(1, 2001))
    v = verdict(prob)
    assert v.decision == "convergesTo" and v.candidate_limit == 0

    ces = cesaro_series(e.model, scheme, params, range(1, 201), backend="enumerate")
    assert ces.records[-1].window.hi == 40_000
    inv_sqrt = np.arange(1, 40_001, dtype=float) ** -0.5
    partial = np.cumsum(inv_sqrt)
    for rec in ces.records:
        n = rec.n
        if n < 2:
            continue
        lower = math.fsum(inv_sqrt[: n * n])
        # every p_k is at least k^(-1/2) and the sum of k^(-1/2) over [1, n^2] exceeds n
        assert lower > n and partial[n * n - 1] > n
        assert rec.cesaro_lo * n >= lower * (1 - 1e-12)
        assert rec.cesaro_lo > 1
    assert verdict(ces).decision == "fails"
    criterion.note(f"min cesaro_n over 2..200 = {min(r.cesaro_lo for r in ces.records[1:]):.4f}")
    elapsed = time.perf_counter() - t0
    criterion.note(f"{elapsed:.2f}s")
    assert elapsed < 10


@pytest.mark.criterion(4, "convergence in probability without convergence in expectation")
def test_criterion_4_expectation(criterion):
    e = corpus.build("ex3_1")
    scheme = make_scheme("squares", horizon=2000)
    ns = range(1, 2001)
    params = OrderParams(HALF, HALF, HALF, r=1)
    prob = density_series(e.model, scheme, params, ns)
    assert verdict(prob).decision == "convergesTo"

    mom_params = params.with_(epsilon="1/4")
    mom = moment_series(e.model, scheme, mom_params, ns, backend="enumerate")
    for rec in mom.records:
        # oracle: E|X_k|^r from the atoms
        lo, hi = rec.window.lo, rec.window.hi
        for k in (lo, hi, (lo + hi) // 2):
            assert sum(p * abs(v) for v, p in e.model.dist(k).atoms) >= Fraction(1, 4)
        assert rec.count == rec.window.width
        assert rec.density == pytest.approx(math.sqrt(2 * rec.n - 1), rel=1e-15)
    assert verdict(mom).decision == "fails"
    criterion.note(f"expectation d_2000 = {mom.records[-1].density:.3f}")


@pytest.mark.criterion(5, "convergence in distribution without convergence in probability")
def test_criterion_5_distribution(criterion):
    e = corpus.build("ex4_1")
    assert e.extra["c"] == Fraction(3, 10)
    scheme = e.schemes["squares"].scheme
    params = e.default_params
    assert params.gamma == Fraction(4, 5)
    ns = range(1, 10_001)
    grid = [Fraction(-1, 2), HALF, Fraction(3, 2)]
    series = cdf_density_series(e.model, scheme, params, grid, ns)
    low = series[0]
    for rec in low.records:
        h = rec.window.width
        heads = iroot(h**3, 10)
        assert heads**10 <= h**3 < (heads + 1) ** 10
        assert rec.count == heads
    last = low.records[-1]
    log_domain = math.exp(math.log(19) - 0.8 * math.log(19999))
    assert last.count == 19 and abs(last.density - 19 / 19999**0.8) <= 1e-12
    assert abs(last.density - log_domain) <= 1e-12
    criterion.note(f"d at r=10^4 is {last.density:.6e}")
    v = combine([verdict(s) for s in series])
    assert v.decision == "convergesTo"

    prob = density_series(e.model, scheme, params, ns)
    for rec in prob.records:
        assert rec.count == rec.window.width
        assert rec.density == pytest.approx(rec.window.width ** 0.2, rel=1e-12)
    for k in (1, 2, 5, 10, 99):
        assert atom_exceedance(e.model, k, HALF) == 1
    assert verdict(prob).decision == "fails"


@pytest.mark.criterion(6, "invariant suite over the model x scheme x parameter grid")
def test_criterion_6_invariants(criterion):
    t0 = time.perf_counter()
    models, schemes, combos = default_invariant_grid()
    assert len(models) >= 3 and len(schemes) >= 3 and len(combos) >= 4
    rep = run_grid(models, schemes, combos)
    assert rep.violations == [], str(rep.violations[:3])
    assert len(rep.runs) == 8
    total = sum(rep.runs.values())
    elapsed = time.perf_counter() - t0
    criterion.note(f"{total} checks, 0 violations, {elapsed:.1f}s")
    assert elapsed < 60


def _equivalence_models():
    heads = FirstOfEachWindow(make_scheme("squares", horizon=400), "0.3")
    blocks = BlockUnion([(10 * j * j, 10 * j * j + j) for j in range(1, 200)])
    sets = {
        "none": Empty(), "perfectSquares": PerfectSquares(), "floorPowers(1/2)": FloorPowers("1/2"),
        "floorPowers(0.3)": FloorPowers("0.3"), "selfPowers": SelfPowers(), "factorialPoints": FactorialPoints(2),
        "blockUnion": blocks, "firstOfEachWindow": heads,
    }
    pm = FixedLaw(DiscreteDistribution.of({-1: HALF, 1: HALF}))
    return {name: RVSequenceModel((Branch(s, pm), Branch(None, TwoPointLaw(0, 1, 1, exp))), DiscreteDistribution.point(0),
                                  name)
            for (name, s), exp in zip(sets.items(), [1, HALF, 1, 2, HALF, 1, 2, 1])}


@pytest.mark.criterion(7, "analytic and enumerated counts agree on 1000 random windows")
def test_criterion_7_backend_equivalence(criterion):
    rng = np.random.default_rng(20240607)
    models = _equivalence_models()
    names = sorted(models)
    checked = 0
    for i in range(1000):
        name = names[i % len(names)]
        model = models[name]
        special = model.branches[0].index_set
        width = int(math.exp(rng.uniform(0, math.log(10**5))))
        if rng.random() < 0.5:
            anchor = int(rng.integers(1, 10**7))
        else:
            # put a special member inside the window
            upto = {"selfPowers": 10**12, "factorialPoints": 10**15}.get(name, 160_000)
            members = list(special.members(1, upto))[:500]
            anchor = int(members[rng.integers(len(members))]) if members else int(rng.integers(1, 10**5))
        lo = max(1, anchor - int(rng.integers(0, width)))
        hi = lo + width - 1
        eps = HALF
        q = model.exceedance_quantity(eps)
        if rng.random() < 0.5:
            level = q.value(int(rng.integers(lo, hi + 1)))
        else:
            level = Fraction(int(rng.integers(1, 10**6)), 10**6)
        scheme = make_scheme("explicitTable", {"alpha": [lo], "beta": [hi]})
        a = level_series(q, scheme, HALF, level, [1], backend="analytic")
        b = level_series(q, scheme, HALF, level, [1], backend="enumerate")
        assert a.records[0].backend == "analytic" and b.records[0].backend == "enumerated"
        assert a.counts == b.counts, (name, lo, hi, level)
        checked += 1
    criterion.note(f"{checked} windows across {len(names)} index set kinds")


@pytest.mark.criterion(8, "classical convergence with failure along a unit-ratio scheme")
def test_criterion_8_ratio_construction(criterion):
    e = corpus.build("thm2_7")
    blocks = e.extra["blocks"]
    scheme = e.schemes["slowRatio"].scheme
    for j, (r, lo, hi) in enumerate(blocks, start=1):
        assert (lo, hi) == (r, r + math.isqrt(r - 1) + 1)
        assert Fraction(hi, lo) < 1 + Fraction(1, j)
        if j > 1:
            prev_hi = blocks[j - 2][2]
            assert lo > prev_hi and Fraction(scheme.beta(r - 1), prev_hi) >= j
    ratios = liminf_ratio(scheme, 10, 10**4)
    assert dict(ratios.ratios)[10**4] == Fraction(101, 100)
    assert ratios.min_ratio == 1.01 and ratios.argmin == 10**4

    classical = density_series(e.model, make_scheme("classical", horizon=10**5),
                               OrderParams(1, HALF, HALF), range(1, 10**5 + 1))
    v = verdict(classical)
    assert v.decision == "convergesTo" and v.candidate_limit == 0

    params = OrderParams(HALF, HALF, HALF)
    slow = density_series(e.model, scheme, params, e.extra["r"])
    for rec in slow.records:
        assert rec.count == rec.window.width
        assert rec.density == pytest.approx(rec.window.width ** 0.5, rel=1e-15)
    assert verdict(slow).decision == "fails"

    fact = make_scheme("custom", {"alpha": "factorial(n)", "beta": "factorial(n + 1)"}, 10)
    rep = liminf_ratio(fact, 1, 10)
    assert rep.min_ratio == 2 and rep.argmin == 1 and rep.trend == "increasing"
    criterion.note(f"{len(blocks)} blocks, factorial min ratio {rep.min_ratio}")


@pytest.mark.criterion(9, "Monte Carlo coverage and band containment")
def test_criterion_9_monte_carlo(criterion):
    e = corpus.build("ex2_1")
    model = e.model
    ks = (3, 5, 10, 101)
    seeds = range(100)
    misses = 0
    for seed in seeds:
        cfg = MCConfig(10**4, seed, 0.01)
        for k in ks:
            est = estimate_exceedance(model, k, HALF, cfg)
            misses += abs(est.p_hat - float(Fraction(1, k))) > est.half_width
    pairs = len(ks) * len(seeds)
    rate = misses / pairs
    limit = 0.01 + 3 * math.sqrt(0.01 * 0.99 / pairs)
    assert rate <= limit
    criterion.note(f"violation rate {rate:.4f} <= {limit:.4f}")

    params = OrderParams(HALF, HALF, HALF)
    scheme = make_scheme("squares", horizon=11)
    exact = density_series(model, scheme, params, range(1, 12))
    windows = 0
    for seed in range(0, 100, 10):
        band = mc_density_series(model, scheme, params, MCConfig(10**4, seed, 0.01), range(1, 12),
                                 exact_series=exact)
        for rec in band:
            assert rec.contains_exact, (seed, rec.n)
            windows += 1
    criterion.note(f"band holds the exact density on {windows} windows")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
