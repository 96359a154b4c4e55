"""Property tests: ordering invariants, oracle agreement and detection of broken models."""

import math
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from abstat import corpus
from abstat.distributions import DiscreteDistribution
from abstat.engine import (CHECKS, OrderParams, cesaro_series, density_series, real_stat_density, verdict)
from abstat.engine.invariants import check_chebyshev, check_markov
from abstat.models import Branch, IndexedLaw, RVSequenceModel, point_model
from abstat.profiles import Constant
from abstat.windows import make_scheme

_MODELS = {}


def model(id):
    if id not in _MODELS:
        _MODELS[id] = corpus.build(id).model
    return _MODELS[id]


SCHEMES = {
    "classical": (make_scheme("classical", horizon=30), range(1, 31)),
    "squares": (make_scheme("squares", horizon=25), range(1, 26)),
    "powerOfN(2)": (make_scheme("powerOfN", {"exponent": 2}, horizon=12), range(1, 13)),
    "lacunary": (make_scheme("lacunary", {"k": [0, 2, 7, 20, 50, 120, 300]}), range(1, 7)),
    "lambda": (make_scheme("lambda", {"lam": [1, 2, 3, 3, 4, 5, 6, 7, 7, 8]}), range(1, 11)),
}

fractions01 = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(1), max_denominator=20)
params_st = st.builds(
    OrderParams,
    gamma=st.fractions(min_value=Fraction(1, 10), max_value=Fraction(1), max_denominator=10),
    epsilon=st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=20),
    delta=fractions01,
    p=st.sampled_from([Fraction(1, 2), 1, 2, 3]),
    r=st.sampled_from([1, 2]),
)
model_ids = st.sampled_from(["ex2_1", "ex2_4", "ex3_1", "thm2_4", "ex2_3"])


@pytest.mark.parametrize("check", sorted(CHECKS))
@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(id=model_ids, scheme=st.sampled_from(sorted(SCHEMES)), params=params_st)
def test_invariants_hold(check, id, scheme, params):
    sch, ns = SCHEMES[scheme]
    assert CHECKS[check](model(id), sch, params, ns) == []


def atom_density_counts(m, scheme, params, ns):
    """Exceedance counts from the atoms of every X_k, no closed forms."""
    x = m.limit.point_value
    out = []
    for w in scheme.windows(ns):
        c = 0
        for k in range(w.lo, w.hi + 1):
            pk = sum(p for v, p in m.dist(k).atoms if abs(v - x) >= params.epsilon)
            c += pk >= params.delta
        out.append(c)
    return out


@settings(max_examples=30, deadline=None)
@given(id=model_ids, scheme=st.sampled_from(sorted(SCHEMES)), params=params_st)
def test_density_matches_atom_oracle(id, scheme, params):
    sch, ns = SCHEMES[scheme]
    m = model(id)
    want = atom_density_counts(m, sch, params, ns)
    for backend in ("auto", "enumerate"):
        got = density_series(m, sch, params, ns, backend=backend)
        assert got.counts == want
        for rec, c in zip(got.records, want):
            assert rec.density == pytest.approx(c / rec.window.width ** float(params.gamma), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(id=st.sampled_from(["ex2_1", "ex2_4", "thm2_4"]), params=params_st)
def test_cesaro_bounds_bracket_atom_sum(id, params):
    sch, ns = SCHEMES["powerOfN(2)"]
    m = model(id)
    s = cesaro_series(m, sch, params, ns)
    for rec in s.records:
        total = math.fsum(float(m.exceedance(k, params.epsilon)) ** float(params.p)
                          for k in range(rec.window.lo, rec.window.hi + 1))
        ces = total / rec.window.width ** float(params.gamma)
        assert rec.cesaro_lo <= ces * (1 + 1e-12) and ces <= rec.cesaro_hi * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(values=st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=8), min_size=30, max_size=30),
       limit=st.fractions(min_value=-1, max_value=1, max_denominator=4),
       eps=st.fractions(min_value=Fraction(1, 8), max_value=2, max_denominator=8))
def test_constants_behave_as_real_sequences(values, limit, eps):
    # one-point laws: the probability density equals the plain density of |x_k - x| >= eps
    m = point_model(lambda k: values[k - 1], limit)
    scheme = make_scheme("classical", horizon=30)
    params = OrderParams(Fraction(1, 2), eps, Fraction(1, 2))
    prob = density_series(m, scheme, params, range(1, 31))
    real = real_stat_density(lambda k: 1 if abs(values[k - 1] - limit) >= eps else 0, scheme,
                             Fraction(1, 2), 1, range(1, 31))
    assert prob.counts == real.counts


def test_limit_is_unique_along_a_scheme():
    m = model("ex2_1")
    sch = make_scheme("squares", horizon=2000)
    params = OrderParams(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    assert verdict(density_series(m, sch, params, range(1, 2001))).decision == "convergesTo"
    assert verdict(density_series(m.with_limit(3), sch, params, range(1, 2001))).decision == "fails"


def test_pushforward_preserves_convergence_to_a_point():
    m = model("ex2_1")
    sch = make_scheme("squares", horizon=2000)
    params = OrderParams(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    g = m.pushforward(lambda x: 2 * x + 1)
    assert g.candidate_limit == 1
    assert verdict(density_series(g, sch, params, range(1, 2001))).decision == "convergesTo"


def _lying_model():
    """Exceedance 1 everywhere but a moment closed form that claims 0."""
    def law(k):
        return DiscreteDistribution.of({0: Fraction(1, 2), 5: Fraction(1, 2)})
    lying = IndexedLaw(law, None, lambda r, x: Constant(0))
    return RVSequenceModel((Branch(None, lying),), DiscreteDistribution.point(0), "lying")


def test_chebyshev_check_detects_inconsistent_model():
    sch, ns = SCHEMES["classical"]
    params = OrderParams(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    found = check_chebyshev(_lying_model(), sch, params, ns, backend="auto")
    assert found and found[0].check == "chebyshev"


def test_markov_check_detects_broken_series(monkeypatch):
    from abstat.engine import invariants

    sch, ns = SCHEMES["classical"]
    params = OrderParams(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    real = invariants.cesaro_series

    def shrunk(*a, **kw):
        s = real(*a, **kw)
        return replace(s, records=tuple(replace(r, cesaro_lo=r.cesaro_lo / 10, cesaro_hi=r.cesaro_hi / 10)
                                        for r in s.records))

    monkeypatch.setattr(invariants, "cesaro_series", shrunk)
    assert check_markov(model("ex2_1"), sch, params, ns)
