"""Command-line front end: ``twoarm {complexity,rates,bound,simulate}``.

Results go to stdout (or ``--out``); the resolved config digest, warnings,
progress and error lines go to stderr. Exit status: 0 success, 2 bad
arguments or config, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from .arms import model_from_config, model_to_config
from .complexity import brute_force_complexities, complexities
from .rates import ExplorationRate, RateKind, beta_values, improved_rate_valid, lil_bound
from .sim import SimulationConfig, SweepPoint, natural_param, simulate, sweep, sweep_csv
from .strategies import AlphaElimination, UniformElimination, strategy_from_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

SEED_ENV = "AB_SEED"


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        _error_line(EXIT_CONFIG, "usage", message)
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _error_line(code: int, kind: str, message: str) -> None:
    print("error=" + json.dumps({"code": code, "type": kind, "message": message}), file=sys.stderr)


def _info(key: str, value: str) -> None:
    print(f"{key}={value}", file=sys.stderr)


def _load_json(source: str) -> Any:
    """Inline JSON (starting with ``{``) or a path to a JSON file."""
    try:
        if source.lstrip().startswith("{"):
            return json.loads(source)
        return json.loads(Path(source).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read JSON from {source!r}: {exc}") from exc


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


def _fmt(v: Any) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _warn_rate(rate: ExplorationRate) -> None:
    if rate.kind is RateKind.IMPROVED_LIL and not improved_rate_valid(rate.delta):
        _info(
            "warning",
            f"improved_lil rate is not certified delta-PAC at delta={rate.delta!r}; running anyway",
        )


def cmd_complexity(args) -> int:
    try:
        model = model_from_config(_load_json(args.model))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _info("config", json.dumps({"model": model_to_config(model)}, sort_keys=True, separators=(",", ":")))
    report = complexities(model).as_dict()
    if args.oracle:
        oracle = brute_force_complexities(model, grid_resolution=args.grid)
        for key in ("c_star", "c_lower_star", "i_star", "i_lower_star", "optimal_alpha"):
            report[f"oracle_{key}"] = getattr(oracle, key)
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for key, value in report.items():
            if value is not None:
                print(f"{key}={_fmt(value)}")
    return EXIT_OK


def cmd_rates(args) -> int:
    try:
        rate = ExplorationRate(RateKind(args.kind), args.delta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.t_max < rate.min_t:
        raise ConfigError(f"--t-max must be >= {rate.min_t} for {rate.kind.value}")
    _info("config", json.dumps({"kind": rate.kind.value, "delta": rate.delta, "t_max": args.t_max}, sort_keys=True))
    _warn_rate(rate)
    out = sys.stdout
    out.write("t,beta\n")
    ts = range(rate.min_t, args.t_max + 1)
    values = beta_values(rate, list(ts))
    for t, b in zip(ts, values):
        out.write(f"{t},{float(b)!r}\n")
    return EXIT_OK


def cmd_bound(args) -> int:
    _info("config", json.dumps({"x": args.x, "beta": args.beta}, sort_keys=True))
    try:
        value = lil_bound(args.x, args.beta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"lil_bound={value!r}")
    return EXIT_OK


def _parse_sweep(raw: str | None):
    if raw is None:
        return None
    try:
        return [float(v) for v in raw.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --sweep list {raw!r}") from exc


def _simulation_config(args) -> SimulationConfig:
    try:
        if args.config is not None:
            cfg = _load_json(args.config)
            if not isinstance(cfg, dict):
                raise ConfigError("--config must hold a JSON object")
            return SimulationConfig.from_dict(cfg)
        missing = [f for f in ("model", "strategy", "reps") if getattr(args, f) is None]
        if missing:
            raise ConfigError("simulate needs " + ", ".join("--" + m for m in missing) + " (or --config)")
        strategy_cfg = _load_json(args.strategy)
        sweep_values = _parse_sweep(args.sweep)
        if sweep_values is None:
            sweep_values = strategy_cfg.get("sweep")
        seed = args.seed if args.seed is not None else _default_seed()
        return SimulationConfig(
            model_from_config(_load_json(args.model)),
            strategy_from_config(strategy_cfg),
            args.reps,
            seed,
            sweep_values,
        )
    except ConfigError:
        raise
    except (ValueError, TypeError, AttributeError) as exc:
        raise ConfigError(str(exc)) from exc


def cmd_simulate(args) -> int:
    config = _simulation_config(args)
    if args.workers < 1:
        raise ConfigError("--workers must be >= 1")
    _info("config", config.digest())
    if isinstance(config.strategy, (UniformElimination, AlphaElimination)):
        for value in config.sweep or [config.strategy.rate.delta]:
            _warn_rate(ExplorationRate(config.strategy.rate.kind, float(value)))

    progress = None
    if args.progress:
        def progress(done: int, total: int) -> None:
            print(f"progress={done}/{total}", file=sys.stderr, flush=True)

    if config.sweep:
        points = sweep(config, workers=args.workers, progress=progress)
    else:
        summary = simulate(config, workers=args.workers, progress=progress)
        points = [SweepPoint(natural_param(config.strategy), summary)]
    text = sweep_csv(points, config.replications, config.seed)
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twoarm", description="Two-armed best-arm identification toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("complexity", help="complexity constants of a model")
    c.add_argument("--model", required=True, help="model JSON file or inline JSON")
    c.add_argument("--oracle", action="store_true", help="also run the grid-search oracle")
    c.add_argument("--grid", type=int, default=2000, help="oracle grid resolution")
    c.add_argument("--json", action="store_true", help="emit one JSON object instead of key=value lines")
    c.set_defaults(func=cmd_complexity)

    r = sub.add_parser("rates", help="tabulate an exploration rate")
    r.add_argument("--kind", required=True, choices=[k.value for k in RateKind])
    r.add_argument("--delta", required=True, type=float)
    r.add_argument("--t-max", required=True, type=int)
    r.set_defaults(func=cmd_rates)

    b = sub.add_parser("bound", help="evaluate the LIL deviation bound")
    b.add_argument("--x", required=True, type=float)
    b.add_argument("--beta", required=True, type=float)
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("simulate", help="Monte Carlo simulation of a strategy")
    s.add_argument("--model", help="model JSON file or inline JSON")
    s.add_argument("--strategy", help="strategy JSON file or inline JSON")
    s.add_argument("--reps", type=int)
    s.add_argument("--seed", type=int, help=f"default: ${SEED_ENV} or 0")
    s.add_argument("--out", help="CSV output path (default stdout)")
    s.add_argument("--sweep", help="comma-separated risk levels or budgets")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--progress", action="store_true", help="report progress on stderr")
    s.add_argument("--config", help="full config digest (file or inline JSON); overrides other inputs")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        _error_line(EXIT_CONFIG, "config", str(exc))
        return EXIT_CONFIG
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        _error_line(EXIT_RUNTIME, type(exc).__name__, str(exc))
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
