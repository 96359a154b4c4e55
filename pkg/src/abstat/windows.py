"""Window schemes n -> [alpha_n, beta_n] with exact integer bounds."""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from ._exact import Number, ceil_exact, ceil_sqrt, exact, floor_exact, log_of, to_float
from .errors import ConstructionFailed, InvalidScheme, OutOfHorizon

KINDS = (
    "classical",
    "lacunary",
    "lambda",
    "squares",
    "powerOfN",
    "factorialEven",
    "factorialOdd",
    "explicitTable",
    "custom",
)

# kinds whose monotonicity is known in closed form; validated analytically
_CLOSED_FORM = {"classical", "squares", "powerOfN", "factorialEven", "factorialOdd"}

# a float this close to an integer power is trusted; beyond it use logs
_FLOAT_EXACT = 2**53


@dataclass(frozen=True)
class Window:
    n: int
    alpha: Number
    beta: Number
    lo: int
    hi: int

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    @property
    def h(self) -> Number:
        """beta - alpha + 1, exact."""
        return exact(self.beta - self.alpha + 1)

    def log_h(self) -> float:
        return log_of(self.h)

    def hgamma(self, gamma: float) -> float:
        """(beta - alpha + 1) ** gamma; log-domain when the width is huge."""
        h = self.h
        if gamma == 1 and isinstance(h, int) and h < _FLOAT_EXACT:
            return float(h)
        if (isinstance(h, int) and h < _FLOAT_EXACT) or isinstance(h, Fraction) and h < _FLOAT_EXACT:
            return float(h) ** gamma
        return math.exp(gamma * self.log_h())

    def density(self, count: int, gamma: float) -> float:
        if count == 0:
            return 0.0
        h = self.h
        if h < _FLOAT_EXACT:
            return count / self.hgamma(gamma)
        return math.exp(math.log(count) - gamma * self.log_h())

    def __contains__(self, k: int) -> bool:
        return self.lo <= k <= self.hi


# ---------------------------------------------------------------------------
# custom-scheme expressions: integer/rational arithmetic in one variable n

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
    ast.Div: lambda a, b: exact(Fraction(a) / Fraction(b)),
}

_FUNCS: dict[str, Callable[..., Any]] = {
    "factorial": math.factorial,
    "isqrt": math.isqrt,
    "ceil_sqrt": ceil_sqrt,
    "floor": floor_exact,
    "ceil": ceil_exact,
    "min": min,
    "max": max,
}


def compile_expression(source: str) -> Callable[[int], Number]:
    """Compile an exact arithmetic expression in ``n``.

    Allowed: integer literals, ``n``, ``+ - * / // % **``, unary minus and the
    functions factorial, isqrt, ceil_sqrt, floor, ceil, min, max. ``/`` is
    rational division.
    """
    tree = ast.parse(source, mode="eval")

    def check(node):
        if isinstance(node, ast.Expression):
            check(node.body)
        elif isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            check(node.left)
            check(node.right)
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            check(node.operand)
        elif isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            pass
        elif isinstance(node, ast.Name) and node.id == "n":
            pass
        elif (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and not node.keywords
        ):
            for a in node.args:
                check(a)
        else:
            raise InvalidScheme(f"unsupported syntax in scheme expression {source!r}: {ast.dump(node)}")

    check(tree)

    def evaluate(node, n):
        if isinstance(node, ast.Expression):
            return evaluate(node.body, n)
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](evaluate(node.left, n), evaluate(node.right, n))
        if isinstance(node, ast.UnaryOp):
            v = evaluate(node.operand, n)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            return n
        return _FUNCS[node.func.id](*(evaluate(a, n) for a in node.args))

    def fn(n: int) -> Number:
        return exact(evaluate(tree, n))

    fn.source = source  # type: ignore[attr-defined]
    return fn


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WindowScheme:
    """Pair of non-decreasing sequences (alpha, beta) up to ``horizon``.

    Build through :func:`make_scheme`, which validates the invariants.
    """

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)
    horizon: int = 1
    n0: int | None = field(default=None, compare=False)
    _alpha: Callable[[int], Number] | None = field(default=None, repr=False, compare=False)
    _beta: Callable[[int], Number] | None = field(default=None, repr=False, compare=False)

    def alpha(self, n: int) -> Number:
        return self._alpha(n)  # type: ignore[misc]

    def beta(self, n: int) -> Number:
        return self._beta(n)  # type: ignore[misc]

    def window(self, n: int) -> Window:
        if not 1 <= n <= self.horizon:
            raise OutOfHorizon(n, self.horizon)
        a, b = self.alpha(n), self.beta(n)
        return Window(n, a, b, ceil_exact(a), floor_exact(b))

    def windows(self, ns: Iterable[int]) -> list[Window]:
        return [self.window(n) for n in ns]

    def describe(self) -> dict:
        """Config-form description (round-trips through :func:`scheme_from_config`)."""
        params = {}
        for key, value in self.params.items():
            if callable(value):
                src = getattr(value, "source", None)
                if src is None:
                    raise InvalidScheme(f"custom scheme parameter {key!r} is a Python callable without source")
                params[key] = src
            elif isinstance(value, (list, tuple)):
                params[key] = [_num_to_config(v) for v in value]
            else:
                params[key] = _num_to_config(value)
        return {"kind": self.kind, "params": params, "horizon": self.horizon}

    @property
    def name(self) -> str:
        if self.kind == "powerOfN":
            return f"powerOfN({self.params['exponent']})"
        if self.kind == "custom":
            a, b = self.params["alpha"], self.params["beta"]
            a = getattr(a, "source", "f")
            b = getattr(b, "source", "g")
            return f"custom[{a}, {b}]"
        return self.kind


def _num_to_config(v):
    v = exact(v)
    return v if isinstance(v, int) else str(v)


def _table(values, label):
    vals = [exact(v) for v in values]

    def fn(n: int) -> Number:
        return vals[n - 1]

    if not vals:
        raise InvalidScheme(f"empty {label} table")
    return fn, len(vals)


def _generators(kind: str, params: Mapping[str, Any]):
    """Return (alpha, beta, max_horizon) for a scheme kind."""
    if kind == "classical":
        return (lambda n: 1), (lambda n: n), None
    if kind == "squares":
        return (lambda n: (n - 1) ** 2 + 1), (lambda n: n * n), None
    if kind == "powerOfN":
        e = exact(params.get("exponent", 1))
        if not isinstance(e, int) or e < 1:
            raise InvalidScheme(f"powerOfN exponent must be a positive integer, got {e!r}")
        return (lambda n: 1), (lambda n: n**e), None
    if kind == "factorialEven":
        return (lambda n: math.factorial(2 * n)), (lambda n: math.factorial(2 * n + 1)), None
    if kind == "factorialOdd":
        return (lambda n: math.factorial(2 * n + 1)), (lambda n: math.factorial(2 * n + 2)), None
    if kind == "lacunary":
        ks = [exact(v) for v in params["k"]]
        if not all(isinstance(v, int) for v in ks) or ks[0] < 0:
            raise InvalidScheme("lacunary cut points must be non-negative integers")
        for r in range(1, len(ks)):
            if ks[r] <= ks[r - 1]:
                raise InvalidScheme("lacunary cut points must be strictly increasing", r)
        return (lambda r: ks[r - 1] + 1), (lambda r: ks[r]), len(ks) - 1
    if kind == "lambda":
        lam = [exact(v) for v in params["lam"]]
        for n in range(1, len(lam) + 1):
            if not 1 <= lam[n - 1] <= n:
                raise InvalidScheme("lambda_n must satisfy 1 <= lambda_n <= n", n)
            if n > 1 and lam[n - 1] < lam[n - 2]:
                raise InvalidScheme("lambda sequence must be non-decreasing", n)
        return (lambda n: n - lam[n - 1] + 1), (lambda n: n), len(lam)
    if kind == "explicitTable":
        fa, la = _table(params["alpha"], "alpha")
        fb, lb = _table(params["beta"], "beta")
        return fa, fb, min(la, lb)
    if kind == "custom":
        a, b = params["alpha"], params["beta"]
        fa = compile_expression(a) if isinstance(a, str) else a
        fb = compile_expression(b) if isinstance(b, str) else b
        return fa, fb, None
    raise InvalidScheme(f"unknown scheme kind {kind!r}")


def make_scheme(kind: str, params: Mapping[str, Any] | None = None, horizon: int | None = None) -> WindowScheme:
    """Build and validate a window scheme.

    Closed-form kinds are monotone by construction. Table and custom kinds
    are checked exactly for every n up to the horizon, and an
    :class:`InvalidScheme` names the first offending n.
    """
    params = dict(params or {})
    fa, fb, max_h = _generators(kind, params)
    if horizon is None:
        if max_h is None:
            raise InvalidScheme(f"scheme kind {kind!r} needs an explicit horizon")
        horizon = max_h
    if horizon < 1:
        raise InvalidScheme("horizon must be >= 1")
    if max_h is not None and horizon > max_h:
        raise InvalidScheme(f"horizon {horizon} exceeds the {max_h} entries supplied", max_h + 1)
    if kind == "custom":
        params = {"alpha": fa, "beta": fb}

    if kind in _CLOSED_FORM:
        n0 = 1
        a1 = fa(1)
        if a1 <= 0:
            raise InvalidScheme("alpha_1 must be positive", 1)
    else:
        n0 = _validate(fa, fb, horizon)
    return WindowScheme(kind, params, horizon, n0, fa, fb)


def _validate(fa, fb, horizon: int) -> int | None:
    prev_a = prev_b = prev_h = None
    n0 = 1
    for n in range(1, horizon + 1):
        a, b = fa(n), fb(n)
        if a <= 0:
            raise InvalidScheme(f"alpha_n must be positive, got {a}", n)
        if b < a:
            raise InvalidScheme(f"beta_n < alpha_n ({b} < {a})", n)
        if floor_exact(b) < ceil_exact(a):
            raise InvalidScheme(f"window [{a}, {b}] contains no integer", n)
        if prev_a is not None:
            if a < prev_a:
                raise InvalidScheme(f"alpha decreases ({prev_a} -> {a})", n)
            if b < prev_b:
                raise InvalidScheme(f"beta decreases ({prev_b} -> {b})", n)
        h = b - a
        if prev_h is not None and h <= prev_h:
            n0 = n
        prev_a, prev_b, prev_h = a, b, h
    # width strictly increasing on [n0, horizon]; None when it stalls at the end
    return n0 if n0 < horizon or horizon == 1 else None


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatioReport:
    min_ratio: float
    argmin: int
    trend: str  # increasing | decreasing | flat | mixed
    ratios: tuple[tuple[int, Number], ...]

    def __str__(self) -> str:
        return f"min ratio {self.min_ratio:.17g} at n={self.argmin}, trend {self.trend}"


def liminf_ratio(scheme: WindowScheme, n_min: int, n_max: int) -> RatioReport:
    """Finite-horizon estimate of liminf beta_n / alpha_n over [n_min, n_max]."""
    if n_min < 1 or n_max > scheme.horizon:
        raise OutOfHorizon(n_min if n_min < 1 else n_max, scheme.horizon)
    if n_max < n_min:
        raise ValueError("empty range")
    ratios = []
    for n in range(n_min, n_max + 1):
        ratios.append((n, exact(Fraction(scheme.beta(n)) / Fraction(scheme.alpha(n)))))
    best_n, best = min(ratios, key=lambda t: t[1])
    diffs = [b[1] - a[1] for a, b in zip(ratios, ratios[1:])]
    if not diffs or all(d == 0 for d in diffs):
        trend = "flat"
    elif all(d > 0 for d in diffs):
        trend = "increasing"
    elif all(d < 0 for d in diffs):
        trend = "decreasing"
    else:
        trend = "mixed"
    return RatioReport(to_float(best), best_n, trend, tuple(ratios))


def construct_slow_ratio_blocks(scheme: WindowScheme, j_max: int) -> list[tuple[int, int, int]]:
    """Greedy subsequence r(1) < r(2) < ... for a scheme with unit liminf ratio.

    Each r(j) is the smallest index after r(j-1) with
    beta_r / alpha_r < 1 + 1/j, beta_{r-1} / beta_{r(j-1)} >= j and
    alpha_r > beta_{r(j-1)} (so the blocks are disjoint). The second
    condition is vacuous for j = 1.

    Returns ``[(r(j), lo, hi), ...]`` with the integer block [lo, hi] of
    window r(j).
    """
    out: list[tuple[int, int, int]] = []
    prev_r = 0
    for j in range(1, j_max + 1):
        found = None
        for r in range(prev_r + 1, scheme.horizon + 1):
            a, b = Fraction(scheme.alpha(r)), Fraction(scheme.beta(r))
            if not b / a < 1 + Fraction(1, j):
                continue
            if j > 1:
                if r < 2:
                    continue
                prev_beta = Fraction(scheme.beta(prev_r))
                if Fraction(scheme.beta(r - 1)) / prev_beta < j:
                    continue
                if a <= prev_beta:
                    continue
            found = r
            break
        if found is None:
            raise ConstructionFailed(
                f"no admissible r(j) within horizon {scheme.horizon}", j
            )
        w = scheme.window(found)
        out.append((found, w.lo, w.hi))
        prev_r = found
    return out


def scheme_from_config(cfg: Mapping[str, Any]) -> WindowScheme:
    return make_scheme(cfg["kind"], cfg.get("params", {}), cfg.get("horizon"))
