"""Sequences of random variables {X_k} described branch by branch.

A model is an ordered list of branches ``(index_set, law)``; index k uses
the first branch whose set contains it, and the last branch (set ``None``)
catches everything else. The limit X is a discrete law; when it is not a
point mass every branch needs the joint law of (X_k, X).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from ._exact import Number, at_least, exact, index_power, power, to_float
from .distributions import DiscreteDistribution, JointDistribution
from .errors import (
    CdfUnavailable,
    MomentUnavailable,
    NonPointLimitWithoutJoint,
    PushforwardUnavailable,
    SamplingUnavailable,
)
from .indexsets import IndexSet
from .profiles import Constant, Profile, Quantity, affine_power

ProfileFn = Callable[..., Optional[Profile]]


def _point(limit: DiscreteDistribution) -> Number:
    if not limit.is_point:
        raise NonPointLimitWithoutJoint(
            "P(|X_k - X| >= eps) is not determined by marginals when X is not a point mass"
        )
    return limit.point_value


class Law:
    """Law of X_k on one branch. Subclasses override what they can answer."""

    def dist(self, k: int) -> DiscreteDistribution:
        raise SamplingUnavailable(f"{type(self).__name__} has no atoms")

    def joint(self, k: int) -> Optional[JointDistribution]:
        return None

    def exceedance(self, k: int, eps, limit: DiscreteDistribution) -> Number:
        j = self.joint(k)
        if j is not None:
            return j.exceedance(eps)
        return self.dist(k).exceedance(_point(limit), eps)

    def exceedance_profile(self, eps, limit) -> Optional[Profile]:
        return None

    def moment(self, k: int, r, limit) -> Number:
        j = self.joint(k)
        if j is not None:
            return j.abs_moment(r)
        try:
            d = self.dist(k)
        except SamplingUnavailable as exc:
            raise MomentUnavailable(str(exc)) from None
        return d.abs_moment(_point(limit), r)

    def moment_profile(self, r, limit) -> Optional[Profile]:
        return None

    def cdf(self, k: int, x) -> Number:
        try:
            return self.dist(k).cdf(x)
        except SamplingUnavailable as exc:
            raise CdfUnavailable(str(exc)) from None

    def cdf_gap_profile(self, x, fx) -> Optional[Profile]:
        return None

    def pushforward(self, g) -> "Law":
        raise PushforwardUnavailable(f"{type(self).__name__} cannot be pushed forward")

    def bound(self, k: int) -> Optional[Number]:
        """max |atom| of X_k, if known."""
        try:
            return max(abs(v) for v in self.dist(k).support)
        except SamplingUnavailable:
            return None


@dataclass(frozen=True)
class FixedLaw(Law):
    """The same discrete law at every index of the branch."""

    law: DiscreteDistribution

    def dist(self, k):
        return self.law

    def exceedance_profile(self, eps, limit):
        return Constant(self.law.exceedance(_point(limit), eps))

    def moment_profile(self, r, limit):
        return Constant(self.law.abs_moment(_point(limit), r))

    def cdf_gap_profile(self, x, fx):
        return Constant(abs(self.law.cdf(x) - fx))

    def pushforward(self, g):
        return FixedLaw(self.law.map(g))


@dataclass(frozen=True)
class TwoPointLaw(Law):
    """X_k = high with probability scale * k**-exponent, else low."""

    low: Number
    high: Number
    scale: Number = 1
    exponent: Number = 1

    def __post_init__(self):
        if self.low == self.high:
            raise ValueError("two-point law needs distinct atoms")
        if not 0 < to_float(self.scale) <= 1 or to_float(self.exponent) < 0:
            raise ValueError("need 0 < scale <= 1 and exponent >= 0")

    def w(self, k: int) -> Number:
        return self.scale * index_power(k, self.exponent)

    def dist(self, k):
        w = self.w(k)
        return DiscreteDistribution(tuple(sorted(((self.low, 1 - w), (self.high, w)), key=lambda a: a[0])))

    def _profile(self, a: Number, b: Number) -> Profile:
        # (1 - w) a + w b
        if self.exponent == 0:
            return Constant(a + self.scale * (b - a))
        return affine_power(a, b - a, self.scale, self.exponent)

    def exceedance(self, k, eps, limit):
        return self.exceedance_profile(eps, limit).value(k)

    def exceedance_profile(self, eps, limit):
        x = _point(limit)
        lo_in = 1 if at_least(abs(self.low - x), eps) else 0
        hi_in = 1 if at_least(abs(self.high - x), eps) else 0
        return self._profile(lo_in, hi_in)

    def moment(self, k, r, limit):
        return self.moment_profile(r, limit).value(k)

    def moment_profile(self, r, limit):
        x = _point(limit)
        return self._profile(power(abs(self.low - x), r), power(abs(self.high - x), r))

    def cdf(self, k, x):
        return self._profile(1 if at_least(x, self.low) else 0, 1 if at_least(x, self.high) else 0).value(k)

    def cdf_gap_profile(self, x, fx):
        a = (1 if at_least(x, self.low) else 0) - fx
        b = (1 if at_least(x, self.high) else 0) - fx
        # value ranges between a (w -> 0) and a + scale (b - a) (w at k = 1)
        top = a + self.scale * (b - a)
        if at_least(a, 0) and at_least(top, 0):
            return self._profile(a, b)
        if at_least(0, a) and at_least(0, top):
            return self._profile(-a, -b)
        return None

    def pushforward(self, g):
        gl, gh = g(self.low), g(self.high)
        gl = gl if isinstance(gl, float) else exact(gl)
        gh = gh if isinstance(gh, float) else exact(gh)
        if gl == gh:
            return FixedLaw(DiscreteDistribution(((gl, 1),)))
        return TwoPointLaw(gl, gh, self.scale, self.exponent)

    def bound(self, k):
        return max(abs(self.low), abs(self.high))


@dataclass(frozen=True)
class IndexedLaw(Law):
    """k -> DiscreteDistribution with optional declared closed forms.

    ``exceedance_form(eps, x)`` and ``moment_form(r, x)`` return profiles
    valid for the point limit x, or None where no closed form applies.
    When a form is present it is used for per-index values too; the atoms
    remain available for sampling, CDFs and consistency checks.
    """

    law: Callable[[int], DiscreteDistribution]
    exceedance_form: Optional[ProfileFn] = None
    moment_form: Optional[ProfileFn] = None
    bound_fn: Optional[Callable[[int], Number]] = None

    def dist(self, k):
        return self.law(k)

    def exceedance(self, k, eps, limit):
        prof = self.exceedance_profile(eps, limit)
        if prof is not None:
            return prof.value(k)
        return super().exceedance(k, eps, limit)

    def exceedance_profile(self, eps, limit):
        if self.exceedance_form is None:
            return None
        return self.exceedance_form(eps, _point(limit))

    def moment(self, k, r, limit):
        prof = self.moment_profile(r, limit)
        if prof is not None:
            return prof.value(k)
        return super().moment(k, r, limit)

    def moment_profile(self, r, limit):
        if self.moment_form is None:
            return None
        return self.moment_form(r, _point(limit))

    def pushforward(self, g):
        law = self.law
        return IndexedLaw(lambda k: law(k).map(g))

    def bound(self, k):
        if self.bound_fn is not None:
            return self.bound_fn(k)
        return super().bound(k)


@dataclass(frozen=True)
class JointLaw(Law):
    """The same joint table of (X_k, X) at every index of the branch."""

    table: JointDistribution

    def dist(self, k):
        return self.table.marginal()

    def joint(self, k):
        return self.table

    def exceedance_profile(self, eps, limit):
        return Constant(self.table.exceedance(eps))

    def moment_profile(self, r, limit):
        return Constant(self.table.abs_moment(r))

    def cdf_gap_profile(self, x, fx):
        return Constant(abs(self.table.marginal().cdf(x) - fx))

    def pushforward(self, g):
        return JointLaw(self.table.map(g))


@dataclass(frozen=True)
class ClosedFormLaw(Law):
    """Only P(|X_k - X| >= eps) is known, through ``form(eps) -> Profile``."""

    form: Callable[[Number], Profile]
    note: str = ""

    def exceedance(self, k, eps, limit):
        return self.form(eps).value(k)

    def exceedance_profile(self, eps, limit):
        return self.form(eps)

    def moment(self, k, r, limit):
        raise MomentUnavailable(f"closed-form exceedance branch has no moments ({self.note})")

    def cdf(self, k, x):
        raise CdfUnavailable(f"closed-form exceedance branch has no CDF ({self.note})")

    def bound(self, k):
        return None


@dataclass(frozen=True)
class Branch:
    index_set: Optional[IndexSet]
    law: Law
    name: str = ""


@dataclass(frozen=True)
class RVSequenceModel:
    """Ordered branches plus the limit law X.

    ``eps_range`` is an optional open interval (lo, hi) outside which the
    model's closed forms are not valid; queries outside it raise ValueError.
    """

    branches: tuple[Branch, ...]
    limit: DiscreteDistribution
    name: str = ""
    eps_range: Optional[tuple[Number, Number]] = None
    notes: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.branches or self.branches[-1].index_set is not None:
            raise ValueError("the last branch must be the default branch (index_set=None)")
        if any(b.index_set is None for b in self.branches[:-1]):
            raise ValueError("only the last branch may be the default branch")

    # -- branch lookup ---------------------------------------------------------

    def branch_index(self, k: int) -> int:
        for i, b in enumerate(self.branches[:-1]):
            if b.index_set.contains(k):
                return i
        return len(self.branches) - 1

    def law_at(self, k: int) -> Law:
        return self.branches[self.branch_index(k)].law

    def _check_eps(self, eps) -> None:
        if to_float(eps) <= 0:
            raise ValueError(f"epsilon must be > 0, got {eps}")
        if self.eps_range is not None:
            lo, hi = self.eps_range
            if not (to_float(lo) < to_float(eps) < to_float(hi)):
                raise ValueError(
                    f"model {self.name!r} is only defined for {lo} < epsilon < {hi}, got {eps}"
                )

    # -- per-index queries ------------------------------------------------------

    def exceedance(self, k: int, eps) -> Number:
        self._check_eps(eps)
        return self.law_at(k).exceedance(k, exact(eps), self.limit)

    def moment(self, k: int, r) -> Number:
        return self.law_at(k).moment(k, exact(r), self.limit)

    def dist(self, k: int) -> DiscreteDistribution:
        return self.law_at(k).dist(k)

    def cdf(self, k: int, x) -> Number:
        return self.law_at(k).cdf(k, exact(x))

    def limit_cdf(self, x) -> Number:
        return self.limit.cdf(exact(x))

    def cdf_gap(self, k: int, x) -> Number:
        x = exact(x)
        return abs(self.cdf(k, x) - self.limit.cdf(x))

    # -- whole-sequence quantities for the engine -----------------------------

    def exceedance_quantity(self, eps) -> Quantity:
        self._check_eps(eps)
        eps = exact(eps)
        pieces = []
        for b in self.branches:
            prof = b.law.exceedance_profile(eps, self.limit)
            if prof is None:
                pieces = None
                break
            pieces.append((b.index_set, prof))
        return Quantity(self._per_index(pieces, lambda k: self.law_at(k).exceedance(k, eps, self.limit)),
                        pieces, f"P(|X_k-X|>={eps})")

    def moment_quantity(self, r) -> Quantity:
        r = exact(r)
        pieces = []
        for b in self.branches:
            try:
                prof = b.law.moment_profile(r, self.limit)
            except MomentUnavailable:
                prof = None
            if prof is None:
                pieces = None
                break
            pieces.append((b.index_set, prof))
        return Quantity(self._per_index(pieces, lambda k: self.law_at(k).moment(k, r, self.limit)),
                        pieces, f"E|X_k-X|^{r}")

    def cdf_gap_quantity(self, x) -> Quantity:
        x = exact(x)
        fx = self.limit.cdf(x)
        pieces = []
        for b in self.branches:
            prof = b.law.cdf_gap_profile(x, fx)
            if prof is None:
                pieces = None
                break
            pieces.append((b.index_set, prof))
        return Quantity(self._per_index(pieces, lambda k: abs(self.law_at(k).cdf(k, x) - fx)),
                        pieces, f"|F_k({x})-F({x})|")

    def _per_index(self, pieces, fallback):
        # the branch profiles already hold the per-index formula; reuse them
        if pieces is None:
            return fallback
        profiles = [prof for _, prof in pieces]
        return lambda k: profiles[self.branch_index(k)].value(k)

    # -- transformations ---------------------------------------------------

    def with_limit(self, limit) -> "RVSequenceModel":
        if not isinstance(limit, DiscreteDistribution):
            limit = DiscreteDistribution.point(limit)
        return replace(self, limit=limit)

    def pushforward(self, g: Callable[[Number], Number]) -> "RVSequenceModel":
        branches = tuple(Branch(b.index_set, b.law.pushforward(g), b.name) for b in self.branches)
        return replace(self, branches=branches, limit=self.limit.map(g), name=f"g({self.name})", eps_range=None)

    @property
    def candidate_limit(self):
        return self.limit.point_value if self.limit.is_point else self.limit.describe()

    # -- sampling ----------------------------------------------------------

    def sample(self, k: int, rng: np.random.Generator, size: int | None = None):
        """Draw X_k (or the pair (X_k, X) for joint branches).

        Returns an array of shape ``(size,)`` or ``(size, 2)``; a scalar or
        a 2-tuple when ``size`` is None.
        """
        law = self.law_at(k)
        joint = law.joint(k)
        if joint is not None:
            vals = np.array([[to_float(a), to_float(b)] for a, b, _ in joint.atoms])
            probs = [p for *_, p in joint.atoms]
        else:
            try:
                d = law.dist(k)
            except SamplingUnavailable:
                raise SamplingUnavailable(f"index {k} uses a closed-form branch; it cannot be sampled") from None
            vals = np.array([to_float(v) for v, _ in d.atoms])
            probs = [p for _, p in d.atoms]
        cum = np.cumsum([to_float(p) for p in probs])
        cum[-1] = 1.0
        u = rng.random(1 if size is None else size)
        idx = np.minimum(np.searchsorted(cum, u, side="right"), len(cum) - 1)
        out = vals[idx]
        if size is None:
            return tuple(out[0]) if out.ndim == 2 else float(out[0])
        return out

    def check_disjoint(self, upto: int) -> list[tuple[int, int, int]]:
        """Indices <= upto lying in two special sets: [(k, i, j), ...]."""
        clashes = []
        specials = [b.index_set for b in self.branches[:-1]]
        for i in range(len(specials)):
            for j in range(i + 1, len(specials)):
                for k in specials[i].members(1, upto):
                    if specials[j].contains(k):
                        clashes.append((k, i, j))
        return clashes


def point_model(values: Callable[[int], Number] | Number, limit, name: str = "constants") -> RVSequenceModel:
    """Deterministic sequence x_k as one-point random variables."""
    if callable(values):
        law: Law = IndexedLaw(lambda k: DiscreteDistribution.point(values(k)))
    else:
        law = FixedLaw(DiscreteDistribution.point(values))
    return RVSequenceModel((Branch(None, law, "all"),), DiscreteDistribution.point(limit), name)


def exceedance_prob(model, k: int, eps) -> Number:
    return model.exceedance(k, eps)


def abs_moment(model: RVSequenceModel, k: int, r) -> Number:
    if to_float(r) <= 0:
        raise ValueError("r must be > 0")
    return model.moment(k, r)


def cdf(model: RVSequenceModel, k: int, x) -> Number:
    return model.cdf(k, x)


def pushforward(model: RVSequenceModel, g) -> RVSequenceModel:
    return model.pushforward(g)


def sample(model: RVSequenceModel, k: int, rng: np.random.Generator, size: int | None = None):
    return model.sample(k, rng, size)


@dataclass(frozen=True)
class BoundModel:
    """Upper bound on P(|cA X_k + cB Y_k - (cA X + cB Y)| >= eps) by a union bound."""

    parts: tuple[tuple[RVSequenceModel, Number], ...]
    name: str = "combined"

    def exceedance(self, k: int, eps) -> Number:
        eps = exact(eps)
        total: Number = 0
        for model, c in self.parts:
            total = total + model.exceedance(k, eps / (2 * abs(c)))
        return total if at_least(1, total) else 1

    def exceedance_quantity(self, eps) -> Quantity:
        return Quantity(lambda k: self.exceedance(k, eps), None, f"union bound at eps={eps}")

    @property
    def candidate_limit(self):
        try:
            return sum(c * m.limit.point_value for m, c in self.parts)
        except ValueError:
            return "law"


def combine_linear(model_a: RVSequenceModel, model_b: RVSequenceModel, c_a, c_b) -> BoundModel:
    """Exceedance bound for cA X_k + cB Y_k: min(1, pA(eps/2|cA|) + pB(eps/2|cB|))."""
    c_a, c_b = exact(c_a), exact(c_b)
    if c_a == 0 and c_b == 0:
        raise ValueError("cA and cB cannot both be zero")
    parts = tuple((m, c) for m, c in ((model_a, c_a), (model_b, c_b)) if c != 0)
    return BoundModel(parts, f"{c_a}*{model_a.name} + {c_b}*{model_b.name}")
