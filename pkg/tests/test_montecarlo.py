import math
from fractions import Fraction

import pytest

from abstat import corpus
from abstat.engine import OrderParams, density_series
from abstat.models import point_model
from abstat.montecarlo import (MC_HEADER, MCConfig, band_rows, estimate_exceedance, hoeffding_half_width, index_rng,
                               mc_density_series)
from abstat.windows import make_scheme

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def ex2_1():
    return corpus.build("ex2_1").model


def test_half_width():
    assert hoeffding_half_width(10**4, 0.01) == pytest.approx(math.sqrt(math.log(200) / 2e4))
    assert MCConfig().half_width == pytest.approx(0.01628, abs=1e-5)


def test_square_index_always_exceeds(ex2_1):
    est = estimate_exceedance(ex2_1, 4, HALF, MCConfig(10**4, 3))
    assert est.p_hat == 1.0


def test_generic_index_within_width(ex2_1):
    est = estimate_exceedance(ex2_1, 101, HALF, MCConfig(10**4, 3))
    assert abs(est.p_hat - 1 / 101) <= est.half_width


def test_point_mass_never_exceeds():
    assert estimate_exceedance(point_model(2, 2), 9, "0.1", MCConfig(1000)).p_hat == 0.0


def test_streams_are_per_index_and_reproducible():
    a = index_rng(5, 10**30).random(4)
    b = index_rng(5, 10**30).random(4)
    c = index_rng(5, 10**30 + 1).random(4)
    assert (a == b).all() and not (a == c).all()
    assert not (index_rng(5, 7).random(4) == index_rng(6, 7).random(4)).all()


def test_band_contains_exact_density(ex2_1):
    params = OrderParams(HALF, HALF, HALF)
    scheme = make_scheme("squares", horizon=5)
    exact = density_series(ex2_1, scheme, params, [5])
    [rec] = mc_density_series(ex2_1, scheme, params, MCConfig(10**4, 11), [5], exact_series=exact)
    assert rec.d_exact == pytest.approx(1 / 3)
    assert rec.contains_exact


def test_zero_model_band_is_zero():
    params = OrderParams(HALF, HALF, HALF)
    band = mc_density_series(point_model(0, 0), make_scheme("classical", horizon=8), params, MCConfig(500),
                             range(1, 9))
    assert all(b.d_lo == b.d_hi == 0 and not b.uncertain for b in band)


def test_delta_inside_band_is_flagged(ex2_1):
    cfg = MCConfig(10**4, 2)
    est = estimate_exceedance(ex2_1, 10, HALF, cfg)
    params = OrderParams(1, HALF, Fraction(repr(est.p_hat)))
    [rec] = mc_density_series(ex2_1, make_scheme("explicitTable", {"alpha": [10], "beta": [10]}), params, cfg, [1])
    assert rec.uncertain == (10,)
    assert rec.count_hi - rec.count_lo >= 1


def test_band_rows_match_header(ex2_1):
    params = OrderParams(HALF, HALF, HALF)
    band = mc_density_series(ex2_1, make_scheme("squares", horizon=3), params, MCConfig(200), [1, 2, 3])
    rows = list(band_rows(band))
    assert all(len(r) == len(MC_HEADER) for r in rows)


def test_config_validation():
    with pytest.raises(ValueError):
        MCConfig(samples=0)
    with pytest.raises(ValueError):
        MCConfig(alpha=1.5)
