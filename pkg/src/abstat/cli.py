"""Command-line front end.

Exit codes: 0 success, 1 a check or expected outcome failed, 2 bad config.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import corpus
from .config import RunConfig
from .engine import (
    OrderParams,
    cdf_density_series,
    cesaro_series,
    combine,
    compare_modes,
    density_series,
    dumps,
    moment_series,
    run_grid,
    verdict,
    write_csv,
)
from .errors import AbstatError, ConfigError, InvalidScheme, UnknownId
from .montecarlo import MC_HEADER, MCConfig, band_rows, mc_density_series
from .windows import liminf_ratio, make_scheme

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _open_out(path: Optional[str]):
    return open(path, "w", newline="") if path else sys.stdout


def _series_for(mode, model, scheme, params, ns, backend, x_grid):
    if mode == "probability":
        return [density_series(model, scheme, params, ns, backend=backend)]
    if mode == "cesaro":
        return [cesaro_series(model, scheme, params, ns, backend=backend)]
    if mode == "expectation":
        return [moment_series(model, scheme, params, ns, backend=backend)]
    return cdf_density_series(model, scheme, params, x_grid, ns, backend=backend)


def _load_config(args) -> RunConfig:
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        cfg = RunConfig.loads(text)
    else:
        if not args.corpus:
            raise ConfigError("give --config FILE or --corpus ID")
        cfg = RunConfig.from_dict({"model": {"corpus": args.corpus, **({"scheme": args.scheme} if args.scheme else {})}})
    for key in ("gamma", "epsilon", "delta", "p", "r"):
        v = getattr(args, key, None)
        if v is not None:
            cfg.params[key] = v
    if getattr(args, "mode", None):
        cfg.mode = args.mode
    start, stop = getattr(args, "n_start", None), getattr(args, "n_stop", None)
    if start is not None or stop is not None:
        cur = cfg.n_range
        if isinstance(cur, list):
            cfg.n_range = [n for n in cur if (start is None or n >= start) and (stop is None or n <= stop)]
        else:
            cfg.n_range = {"start": start if start is not None else cur.get("start", 1),
                           "stop": stop if stop is not None else cur["stop"], "step": cur.get("step", 1)}
    if getattr(args, "backend", None):
        cfg.backend = args.backend
    if getattr(args, "output", None):
        cfg.output = args.output
    for key, attr in (("tau", "tau"), ("tail_fraction", "tail_fraction")):
        v = getattr(args, attr, None)
        if v is not None:
            cfg.verdict[key] = v
    for key, attr in (("samples", "samples"), ("seed", "seed"), ("confidence", "confidence")):
        v = getattr(args, attr, None)
        if v is not None:
            cfg.mc[key] = v
    cfg.validate()
    return cfg


def cmd_analyze(args) -> int:
    cfg = _load_config(args)
    model, scheme = cfg.build()
    params = cfg.order_params()
    series = _series_for(cfg.mode, model, scheme, params, cfg.ns(), cfg.backend, cfg.x_grid)
    tau, tail = float(cfg.verdict["tau"]), float(cfg.verdict["tail_fraction"])
    verdicts = [verdict(s, tau, tail) for s in series]
    v = verdicts[0] if len(verdicts) == 1 else combine(verdicts)
    out = _open_out(cfg.output)
    try:
        write_csv(series, out)
    finally:
        if out is not sys.stdout:
            out.close()
    record = {"config": cfg.to_dict(), "verdict": v.to_json()}
    if args.verdict:
        Path(args.verdict).write_text(dumps(record))
    else:
        sys.stdout.write(dumps(record) if cfg.output else "\n" + dumps(record))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    entry = corpus.build(args.id)
    outcomes = corpus.run(entry, args.tau, args.tail_fraction)
    out = _open_out(args.output)
    try:
        write_csv([s for o in outcomes for s in o.series], out)
    finally:
        if out is not sys.stdout:
            out.close()
    for o in outcomes:
        print(o.line())
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FAIL


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    model, scheme = cfg.build()
    rep = compare_modes(model, scheme, cfg.order_params(), cfg.ns(), cfg.x_grid,
                        tau=float(cfg.verdict["tau"]), tail_fraction=float(cfg.verdict["tail_fraction"]),
                        backend=cfg.backend)
    for line in rep.lines():
        print(line)
    if args.json:
        payload = {m: (v.to_json() if v else None) for m, v in rep.verdicts.items()}
        Path(args.json).write_text(dumps(payload))
    if not rep.certified:
        bad = [c for c in rep.markov + rep.reverse if not c.ok][0]
        print(f"certificate violated at n={bad.n}: {bad.lhs!r} > {bad.rhs!r}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_liminf(args) -> int:
    params = json.loads(args.params) if args.params else {}
    if args.alpha or args.beta:
        if not (args.alpha and args.beta):
            raise ConfigError("--alpha and --beta go together")
        scheme = make_scheme("custom", {"alpha": args.alpha, "beta": args.beta}, args.horizon)
    else:
        scheme = make_scheme(args.kind, params, args.horizon)
    rep = liminf_ratio(scheme, args.n_min, args.n_max or scheme.horizon)
    if args.table:
        for n, ratio in rep.ratios:
            print(f"{n},{float(ratio):.17g}")
    print(rep)
    return EXIT_OK


def cmd_mc(args) -> int:
    cfg = _load_config(args)
    model, scheme = cfg.build()
    params = cfg.order_params()
    mc = MCConfig(int(cfg.mc["samples"]), int(cfg.mc["seed"]), float(cfg.mc["confidence"]))
    ns = cfg.ns()
    try:
        exact_series = density_series(model, scheme, params, ns, backend=cfg.backend)
    except AbstatError:
        exact_series = None
    band = mc_density_series(model, scheme, params, mc, ns, exact_series=exact_series)
    out = _open_out(cfg.output)
    try:
        out.write(",".join(MC_HEADER) + "\n")
        for row in band_rows(band):
            out.write(",".join(row) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    missed = [b.n for b in band if b.contains_exact is False]
    if missed:
        print(f"exact density outside the band at n={missed[:10]}", file=sys.stderr)
    return EXIT_OK


def default_invariant_grid(scale: int = 1):
    """At least 3 corpus models x 3 schemes x 4 parameter combinations."""
    models = [corpus.build("ex2_1").model, corpus.build("ex2_4").model, corpus.build("ex3_1").model,
              corpus.build("thm2_4").model]
    schemes = [
        (make_scheme("classical", horizon=40 * scale), range(1, 40 * scale + 1)),
        (make_scheme("squares", horizon=30 * scale), range(1, 30 * scale + 1)),
        (make_scheme("powerOfN", {"exponent": 2}, horizon=15 * scale), range(1, 15 * scale + 1)),
        (make_scheme("lacunary", {"k": [0, 3, 10, 30, 80, 200, 500, 1200]}), range(1, 8)),
    ]
    combos = [
        OrderParams("1/2", "1/2", "1/2", 1, 1),
        OrderParams("0.3", "1/4", "0.1", 2, 2),
        OrderParams("0.8", "0.9", "0.7", "1/2", "1/2"),
        OrderParams(1, "0.2", "0.3", 3, 1),
    ]
    return models, schemes, combos


def cmd_invariants(args) -> int:
    models, schemes, combos = default_invariant_grid(args.scale)
    if args.models:
        models = [corpus.build(i).model for i in args.models.split(",")]
    rep = run_grid(models, schemes, combos, stop_on_first=True)
    total = sum(rep.runs.values())
    if rep.violations:
        print(rep.violations[0])
        return EXIT_FAIL
    for name, count in sorted(rep.runs.items()):
        print(f"PASS {name}: {count} runs")
    print(f"{total} checks over {len(models)} models x {len(schemes)} schemes x {len(combos)} params, 0 violations")
    return EXIT_OK


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run config")
    p.add_argument("--corpus", choices=corpus.IDS, help="use a corpus model instead of a config file")
    p.add_argument("--scheme", help="scheme name inside the corpus entry")
    p.add_argument("--mode", choices=("probability", "cesaro", "expectation", "distribution"))
    for key in ("gamma", "epsilon", "delta", "p", "r"):
        p.add_argument(f"--{key}")
    p.add_argument("--n-start", type=int)
    p.add_argument("--n-stop", type=int)
    p.add_argument("--backend", choices=("auto", "analytic", "enumerate"))
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    p.add_argument("--tau", type=float)
    p.add_argument("--tail-fraction", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abstat", description="Window-density convergence diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="series CSV and verdict JSON for one run")
    _add_run_flags(p)
    p.add_argument("--verdict", help="verdict JSON path (default: after the CSV on stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reproduce", help="run a corpus entry and check its expected outcomes")
    p.add_argument("id", choices=corpus.IDS)
    p.add_argument("--output", "-o")
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--tail-fraction", type=float, default=0.5)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("compare-modes", help="verdicts for all four modes plus the Markov certificates")
    _add_run_flags(p)
    p.add_argument("--json", help="write the verdicts as JSON")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("liminf-ratio", help="finite-horizon liminf of beta_n / alpha_n")
    p.add_argument("--kind", default="classical")
    p.add_argument("--params", help="scheme params as JSON")
    p.add_argument("--alpha", help="custom alpha_n expression in n")
    p.add_argument("--beta", help="custom beta_n expression in n")
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int)
    p.add_argument("--table", action="store_true", help="print every ratio")
    p.set_defaults(func=cmd_liminf)

    p = sub.add_parser("mc-estimate", help="Monte Carlo density band CSV")
    _add_run_flags(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--confidence", type=float, help="Hoeffding failure probability alpha")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("check-invariants", help="pointwise invariant suite over a grid")
    p.add_argument("--models", help="comma-separated corpus ids (default ex2_1,ex2_4,ex3_1,thm2_4)")
    p.add_argument("--scale", type=int, default=1, help="multiply every horizon")
    p.set_defaults(func=cmd_invariants)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, InvalidScheme, UnknownId, ValueError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AbstatError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())
