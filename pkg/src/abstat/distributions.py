"""Finite discrete laws: marginals and (X_k, X) joint tables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from ._exact import Number, at_least, exact, power, to_float

PROB_TOL = 1e-12


def _norm_value(v) -> Number:
    # mapped values: rationals stay exact, computed floats are kept as they are
    return v if isinstance(v, float) else exact(v)


def _check_probs(probs: Iterable[Number], what: str) -> None:
    total = 0.0
    for p in probs:
        if to_float(p) < 0:
            raise ValueError(f"negative probability {p} in {what}")
        total += to_float(p)
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"probabilities of {what} sum to {total!r}, not 1")


@dataclass(frozen=True)
class DiscreteDistribution:
    atoms: tuple[tuple[Number, Number], ...]

    def __post_init__(self):
        vals = [v for v, _ in self.atoms]
        if len(set(vals)) != len(vals):
            raise ValueError(f"atom values must be distinct: {vals}")
        _check_probs((p for _, p in self.atoms), "distribution")

    @classmethod
    def of(cls, mapping_or_pairs) -> "DiscreteDistribution":
        """Build from ``{value: prob}`` or ``[(value, prob), ...]``; numbers are made exact."""
        items = mapping_or_pairs.items() if hasattr(mapping_or_pairs, "items") else mapping_or_pairs
        atoms = tuple(sorted(((exact(v), exact(p)) for v, p in items), key=lambda a: a[0]))
        return cls(atoms)

    @classmethod
    def point(cls, value) -> "DiscreteDistribution":
        return cls(((exact(value), 1),))

    @property
    def is_point(self) -> bool:
        live = [v for v, p in self.atoms if p != 0]
        return len(live) == 1

    @property
    def point_value(self) -> Number:
        live = [v for v, p in self.atoms if p != 0]
        if len(live) != 1:
            raise ValueError("distribution is not a point mass")
        return live[0]

    @property
    def support(self) -> list[Number]:
        return [v for v, p in self.atoms if p != 0]

    def cdf(self, x) -> Number:
        total: Number = 0
        for v, p in self.atoms:
            if at_least(x, v):
                total = total + p
        return total

    def exceedance(self, x, eps) -> Number:
        """P(|V - x| >= eps) for a constant x."""
        total: Number = 0
        for v, p in self.atoms:
            if at_least(abs(v - x), eps):
                total = total + p
        return total

    def abs_moment(self, x, r) -> Number:
        total: Number = 0
        for v, p in self.atoms:
            if p:
                total = total + p * power(abs(v - x), r)
        return total

    def map(self, g: Callable[[Number], Number]) -> "DiscreteDistribution":
        merged: dict = {}
        for v, p in self.atoms:
            gv = _norm_value(g(v))
            merged[gv] = merged.get(gv, 0) + p
        return DiscreteDistribution(tuple(sorted(merged.items(), key=lambda a: a[0])))

    def describe(self) -> list:
        return [[_cfg(v), _cfg(p)] for v, p in self.atoms]


def _cfg(x):
    return x if isinstance(x, (int, float)) else str(x)


@dataclass(frozen=True)
class JointDistribution:
    """Atoms ``(x_k, x, prob)`` of the pair (X_k, X)."""

    atoms: tuple[tuple[Number, Number, Number], ...]

    def __post_init__(self):
        pairs = [(a, b) for a, b, _ in self.atoms]
        if len(set(pairs)) != len(pairs):
            raise ValueError("joint atoms must be distinct pairs")
        _check_probs((p for *_, p in self.atoms), "joint distribution")

    @classmethod
    def of(cls, triples) -> "JointDistribution":
        return cls(tuple((exact(a), exact(b), exact(p)) for a, b, p in triples))

    def marginal(self) -> DiscreteDistribution:
        return self._marginal(0)

    def limit_marginal(self) -> DiscreteDistribution:
        return self._marginal(1)

    def _marginal(self, i: int) -> DiscreteDistribution:
        m: dict = {}
        for atom in self.atoms:
            m[atom[i]] = m.get(atom[i], 0) + atom[2]
        return DiscreteDistribution(tuple(sorted(m.items(), key=lambda a: a[0])))

    def exceedance(self, eps) -> Number:
        total: Number = 0
        for a, b, p in self.atoms:
            if at_least(abs(a - b), eps):
                total = total + p
        return total

    def abs_moment(self, r) -> Number:
        total: Number = 0
        for a, b, p in self.atoms:
            if p:
                total = total + p * power(abs(a - b), r)
        return total

    def map(self, g: Callable[[Number], Number]) -> "JointDistribution":
        merged: dict = {}
        for a, b, p in self.atoms:
            key = (_norm_value(g(a)), _norm_value(g(b)))
            merged[key] = merged.get(key, 0) + p
        return JointDistribution(tuple((a, b, p) for (a, b), p in sorted(merged.items())))

    def describe(self) -> list:
        return [[_cfg(a), _cfg(b), _cfg(p)] for a, b, p in self.atoms]
