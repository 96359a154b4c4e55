"""RunConfig: one JSON document describing one run.

Numbers that are not integers are kept as strings ("1/2", "0.3") so the
canonical form round-trips byte for byte and parses exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from ._exact import exact
from .distributions import DiscreteDistribution, JointDistribution
from .engine import OrderParams, dumps
from .errors import ConfigError
from .indexsets import index_set_from_config
from .models import Branch, FixedLaw, JointLaw, RVSequenceModel, TwoPointLaw
from .windows import scheme_from_config

MODES = ("probability", "cesaro", "expectation", "distribution")
_TOP_KEYS = {"scheme", "model", "params", "mode", "n_range", "output", "verdict", "mc", "backend", "x_grid"}


def _num(x) -> Any:
    """Canonical JSON form of a number: ints stay ints, everything else a string."""
    if isinstance(x, bool):
        raise ConfigError(f"expected a number, got {x!r}")
    try:
        v = exact(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad number {x!r}: {exc}") from None
    return v if isinstance(v, int) else str(x) if isinstance(x, str) else repr(x)


def _num_tree(x):
    if isinstance(x, dict):
        return {k: _num_tree(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_num_tree(v) for v in x]
    if isinstance(x, float):
        return repr(x)
    return x


@dataclass
class RunConfig:
    model: dict
    scheme: Optional[dict] = None
    params: dict = field(default_factory=lambda: OrderParams().describe())
    mode: str = "probability"
    n_range: dict = field(default_factory=lambda: {"start": 1, "stop": 100, "step": 1})
    output: Optional[str] = None
    verdict: dict = field(default_factory=lambda: {"tau": 0.05, "tail_fraction": 0.5})
    mc: dict = field(default_factory=lambda: {"samples": 10000, "seed": 0, "confidence": 0.01})
    backend: str = "auto"
    x_grid: Optional[list] = None

    # -- parsing ----------------------------------------------------------

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(d) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "model" not in d:
            raise ConfigError("config needs a 'model' section")
        cfg = cls(model=d["model"])
        if isinstance(d["model"], dict) and "corpus" in d["model"]:
            base = _corpus_defaults(d["model"], "scheme" in d)
            d = {**base, **d, "params": {**base["params"], **d.get("params", {})}}
        if "scheme" in d:
            cfg.scheme = d["scheme"]
        if "params" in d:
            merged = dict(cfg.params)
            merged.update(d["params"])
            cfg.params = {k: _num(v) for k, v in merged.items()}
        if "mode" in d:
            cfg.mode = d["mode"]
        if "n_range" in d:
            cfg.n_range = d["n_range"]
        cfg.output = d.get("output")
        if "verdict" in d:
            cfg.verdict = {**cfg.verdict, **d["verdict"]}
        if "mc" in d:
            cfg.mc = {**cfg.mc, **d["mc"]}
        cfg.backend = d.get("backend", "auto")
        cfg.x_grid = [_num(x) for x in d["x_grid"]] if d.get("x_grid") is not None else None
        cfg.validate()
        return cfg

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.backend not in ("auto", "analytic", "enumerate"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        self.order_params()
        self.ns()
        if "corpus" not in self.model and self.scheme is None:
            raise ConfigError("a 'scheme' section is required unless the model comes from the corpus")

    # -- canonical form -----------------------------------------------------

    def to_dict(self) -> dict:
        d = {
            "model": self.model, "params": self.params, "mode": self.mode, "n_range": self.n_range,
            "verdict": self.verdict, "mc": self.mc, "backend": self.backend,
        }
        if self.scheme is not None:
            d["scheme"] = self.scheme
        if self.output is not None:
            d["output"] = self.output
        if self.x_grid is not None:
            d["x_grid"] = self.x_grid
        return _num_tree(d)

    def canonical(self) -> str:
        return dumps(self.to_dict())

    # -- materialization ----------------------------------------------------

    def order_params(self) -> OrderParams:
        try:
            return OrderParams(**{k: exact(v) for k, v in self.params.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad params {self.params}: {exc}") from None

    def ns(self) -> list[int]:
        r = self.n_range
        if isinstance(r, list):
            ns = [int(exact(v)) for v in r]
        else:
            try:
                ns = list(range(int(exact(r.get("start", 1))), int(exact(r["stop"])) + 1, int(exact(r.get("step", 1)))))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad n_range {r}: {exc}") from None
        if not ns:
            raise ConfigError(f"n_range {r} is empty")
        return ns

    def build(self):
        """(model, scheme) described by this config."""
        from . import corpus

        m = self.model
        try:
            if "corpus" in m:
                entry = corpus.build(m["corpus"], **m.get("overrides", {}))
                model = entry.models[m.get("binding", "default")]
                if self.scheme is not None:
                    scheme = scheme_from_config(self.scheme)
                else:
                    name = m.get("scheme") or next(iter(entry.schemes))
                    scheme = entry.schemes[name].scheme
                return model, scheme
            return model_from_config(m), scheme_from_config(self.scheme)
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad model or scheme: {type(exc).__name__}: {exc}") from None


def _corpus_defaults(ref: dict, own_scheme: bool) -> dict:
    """Params, x grid and n range that a corpus entry runs with by default."""
    from . import corpus

    try:
        entry = corpus.build(ref["corpus"], **ref.get("overrides", {}))
    except TypeError as exc:
        raise ConfigError(f"bad corpus overrides: {exc}") from None
    out: dict = {"params": entry.default_params.describe()}
    if "x_grid" in entry.extra:
        out["x_grid"] = [str(x) for x in entry.extra["x_grid"]]
    if not own_scheme:
        name = ref.get("scheme") or next(iter(entry.schemes))
        if name not in entry.schemes:
            raise ConfigError(f"corpus entry {entry.id} has no scheme {name!r}; choose from {list(entry.schemes)}")
        ns = list(entry.schemes[name].ns)
        if all(b - a == 1 for a, b in zip(ns, ns[1:])):
            out["n_range"] = {"start": ns[0], "stop": ns[-1], "step": 1}
        else:
            out["n_range"] = ns
    return out


def _law_from_config(cfg: dict):
    kind = cfg.get("kind")
    if kind == "fixed":
        return FixedLaw(DiscreteDistribution.of(cfg["atoms"]))
    if kind == "twoPoint":
        return TwoPointLaw(exact(cfg["low"]), exact(cfg["high"]), exact(cfg.get("scale", 1)),
                           exact(cfg.get("exponent", 1)))
    if kind == "joint":
        return JointLaw(JointDistribution.of(cfg["atoms"]))
    raise ConfigError(f"unknown law kind {kind!r}; use fixed, twoPoint or joint")


def model_from_config(cfg: dict) -> RVSequenceModel:
    """Branch list plus limit; the last branch has ``"set": null``.

    ``{"branches": [{"set": {"kind": "perfectSquares"}, "law": {"kind": "fixed", "atoms": [[-1, "1/2"], [1, "1/2"]]}},
                    {"set": null, "law": {"kind": "twoPoint", "low": 0, "high": 1, "exponent": 1}}],
       "limit": 0}``
    """
    branches = []
    for b in cfg["branches"]:
        s = b.get("set")
        branches.append(Branch(index_set_from_config(s) if s is not None else None, _law_from_config(b["law"]),
                               b.get("name", "")))
    limit = cfg.get("limit", 0)
    limit = DiscreteDistribution.of(limit) if isinstance(limit, list) else DiscreteDistribution.point(limit)
    return RVSequenceModel(tuple(branches), limit, cfg.get("name", "custom"))
