"""Seeded sampling estimates of exceedance probabilities with Hoeffding bands.

Every index k draws from its own Philox stream keyed by (seed, k), so an
estimate does not depend on which other indices were sampled or in what
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ._exact import exact, fmt, to_float
from .engine.series import ENUM_LIMIT, OrderParams
from .errors import NonPointLimitWithoutJoint, WindowTooLarge
from .windows import Window, WindowScheme

MC_HEADER = ("n", "alpha", "beta", "width", "count_lo", "count_hat", "count_hi", "uncertain",
             "d_lo", "d_hat", "d_hi", "d_exact")


@dataclass(frozen=True)
class MCConfig:
    samples: int = 10_000
    seed: int = 0
    alpha: float = 0.01

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0 < self.alpha < 1:
            raise ValueError("confidence alpha must lie in (0, 1)")

    @property
    def half_width(self) -> float:
        return hoeffding_half_width(self.samples, self.alpha)


def hoeffding_half_width(samples: int, alpha: float) -> float:
    return math.sqrt(math.log(2 / alpha) / (2 * samples))


def index_rng(seed: int, k: int) -> np.random.Generator:
    """Counter-based generator for index k; draw i is position i of the stream."""
    key = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, *_words(k)])
    return np.random.Generator(np.random.Philox(key))


def _words(k: int) -> list[int]:
    # big indices split into 32-bit words so every k gets a distinct key
    out = []
    while True:
        out.append(k & 0xFFFFFFFF)
        k >>= 32
        if not k:
            return out


@dataclass(frozen=True)
class Estimate:
    k: int
    p_hat: float
    half_width: float

    @property
    def lo(self) -> float:
        return self.p_hat - self.half_width

    @property
    def hi(self) -> float:
        return self.p_hat + self.half_width


def estimate_exceedance(model, k: int, eps, cfg: MCConfig) -> Estimate:
    """Fraction of samples with |x_k - x| >= eps, with the Hoeffding half-width."""
    eps_f = to_float(exact(eps))
    draws = model.sample(k, index_rng(cfg.seed, k), cfg.samples)
    if draws.ndim == 2:
        diff = np.abs(draws[:, 0] - draws[:, 1])
    else:
        if not model.limit.is_point:
            raise NonPointLimitWithoutJoint(f"index {k}: sampling needs the joint law of (X_k, X)")
        diff = np.abs(draws - to_float(model.limit.point_value))
    p_hat = float(np.count_nonzero(diff >= eps_f)) / cfg.samples
    return Estimate(k, p_hat, cfg.half_width)


@dataclass(frozen=True)
class BandRecord:
    n: int
    window: Window
    count_lo: int
    count_hat: int
    count_hi: int
    uncertain: tuple[int, ...]
    d_lo: float
    d_hat: float
    d_hi: float
    d_exact: Optional[float] = None

    @property
    def contains_exact(self) -> Optional[bool]:
        if self.d_exact is None:
            return None
        return self.d_lo <= self.d_exact <= self.d_hi


def mc_density_series(model, scheme: WindowScheme, params: OrderParams, cfg: MCConfig, ns: Iterable[int],
                      *, enum_limit: int = ENUM_LIMIT, exact_series=None) -> list[BandRecord]:
    """Density band from p_hat - w, p_hat and p_hat + w per index.

    Indices with p_hat - w < delta <= p_hat + w are listed as uncertain.
    ``exact_series`` (a DiagnosticSeries on the same n) fills ``d_exact``.
    """
    delta = to_float(params.delta)
    g = params.gamma_f
    exact_by_n = exact_series.by_n() if exact_series is not None else {}
    cache: dict[int, Estimate] = {}
    out = []
    for w in scheme.windows(ns):
        if w.width > enum_limit:
            raise WindowTooLarge(w.n, w.width, enum_limit)
        c_lo = c_hat = c_hi = 0
        unsure = []
        for k in range(w.lo, w.hi + 1):
            est = cache.get(k)
            if est is None:
                est = cache[k] = estimate_exceedance(model, k, params.epsilon, cfg)
            c_lo += est.lo >= delta
            c_hat += est.p_hat >= delta
            c_hi += est.hi >= delta
            if est.lo < delta <= est.hi:
                unsure.append(k)
        rec = exact_by_n.get(w.n)
        out.append(BandRecord(w.n, w, c_lo, c_hat, c_hi, tuple(unsure), w.density(c_lo, g),
                              w.density(c_hat, g), w.density(c_hi, g), rec.density if rec else None))
    return out


def band_rows(records: Iterable[BandRecord]):
    for r in records:
        yield [str(r.n), fmt(r.window.alpha), fmt(r.window.beta), str(r.window.width), str(r.count_lo),
               str(r.count_hat), str(r.count_hi), str(len(r.uncertain)), fmt(r.d_lo), fmt(r.d_hat), fmt(r.d_hi),
               fmt(r.d_exact)]
