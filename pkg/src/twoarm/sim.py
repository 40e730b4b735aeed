"""Deterministic Monte Carlo harness.

Replication ``r`` always runs on ``derive(seed, r)`` and per-replication
results are reassembled in index order, so summaries do not depend on the
number of worker processes or on scheduling. Every point of a sweep reuses the
same streams (common random numbers).
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from .arms import BanditModel, model_from_config, model_to_config
from .complexity import complexities
from .rng import SEED_BITS, derive
from .strategies import (
    SEQUENTIAL,
    FixedBudgetStatic,
    StrategyError,
    StrategySpec,
    make_runner,
    strategy_delta,
    strategy_from_config,
    strategy_to_config,
    with_budget,
    with_delta,
)

__all__ = [
    "CSV_COLUMNS",
    "SimulationConfig",
    "SimulationSummary",
    "SweepPoint",
    "log_error_slope",
    "simulate",
    "sweep",
    "sweep_csv",
    "theoretical_curve",
]

CSV_COLUMNS = (
    "sweep_param",
    "replications",
    "error_prob",
    "error_stderr",
    "mean_tau",
    "tau_p50",
    "tau_p90",
    "tau_p99",
    "censored_frac",
    "seed",
    "error",
)

Progress = Callable[[int, int], None]


@dataclass(frozen=True)
class SimulationConfig:
    """A model, a strategy and the replication plan.

    ``sweep`` lists risk levels for sequential strategies or budgets for
    fixed-budget ones; each value replaces the strategy's own parameter.
    """

    model: BanditModel
    strategy: StrategySpec
    replications: int
    seed: int
    sweep: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if isinstance(self.replications, bool) or int(self.replications) != self.replications:
            raise ValueError(f"replications must be an integer, got {self.replications!r}")
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if not 0 <= self.seed < 1 << SEED_BITS:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.sweep is not None:
            values = tuple(self.sweep)
            if not values:
                raise ValueError("sweep list is empty")
            if isinstance(self.strategy, FixedBudgetStatic):
                values = tuple(int(v) for v in values)
            else:
                values = tuple(float(v) for v in values)
            for v in values:
                self.point(v)
            object.__setattr__(self, "sweep", values)

    def point(self, value: float) -> StrategySpec:
        """The strategy with its sweep parameter set to ``value``."""
        if isinstance(self.strategy, FixedBudgetStatic):
            return with_budget(self.strategy, int(value))
        return with_delta(self.strategy, float(value))

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": model_to_config(self.model),
            "strategy": strategy_to_config(self.strategy),
            "replications": int(self.replications),
            "seed": int(self.seed),
            "sweep": None if self.sweep is None else list(self.sweep),
        }

    @classmethod
    def from_dict(cls, cfg: Mapping[str, Any]) -> "SimulationConfig":
        try:
            model = model_from_config(cfg["model"])
            strategy = strategy_from_config(cfg["strategy"])
            sweep = cfg.get("sweep")
            if sweep is None:
                sweep = cfg["strategy"].get("sweep")
            return cls(model, strategy, int(cfg["replications"]), int(cfg["seed"]), sweep)
        except KeyError as exc:
            raise ValueError(f"simulation config is missing {exc}") from exc

    def digest(self) -> str:
        """Canonical one-line JSON; :meth:`from_dict` on it rebuilds the config."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class SimulationSummary:
    error_prob: float
    error_prob_stderr: float
    error_prob_upper: float
    mean_tau: float
    tau_quantiles: dict[int, float]
    censored_frac: float
    replications: int
    errors: int
    censored: int
    seed: int
    config_echo: str = field(repr=False)

    def row(self, sweep_param: Any) -> dict[str, Any]:
        return {
            "sweep_param": sweep_param,
            "replications": self.replications,
            "error_prob": self.error_prob,
            "error_stderr": self.error_prob_stderr,
            "mean_tau": self.mean_tau,
            "tau_p50": self.tau_quantiles[50],
            "tau_p90": self.tau_quantiles[90],
            "tau_p99": self.tau_quantiles[99],
            "censored_frac": self.censored_frac,
            "seed": self.seed,
            "error": "",
        }


@dataclass(frozen=True)
class SweepPoint:
    param: float
    summary: SimulationSummary | None
    error: str | None = None


def _run_chunk(model: BanditModel, spec: StrategySpec, seed: int, start: int, stop: int):
    runner = make_runner(spec, model)
    n = stop - start
    tau = np.empty(n, dtype=np.int64)
    wrong = np.zeros(n, dtype=bool)
    cens = np.zeros(n, dtype=bool)
    for i in range(n):
        out = runner(derive(seed, start + i))
        tau[i] = out.tau
        wrong[i] = not out.correct
        cens[i] = out.censored
    return start, tau, wrong, cens


def _chunks(total: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, min(10_000, math.ceil(total / (8 * workers))))
    return [(s, min(total, s + size)) for s in range(0, total, size)]


def _collect(model, spec, seed, total, workers, progress):
    chunks = _chunks(total, workers)
    tau = np.empty(total, dtype=np.int64)
    wrong = np.empty(total, dtype=bool)
    cens = np.empty(total, dtype=bool)
    done = 0

    def store(result):
        nonlocal done
        start, t, w, c = result
        tau[start : start + len(t)] = t
        wrong[start : start + len(t)] = w
        cens[start : start + len(t)] = c
        done += len(t)
        if progress is not None:
            progress(done, total)

    if workers <= 1:
        for s, e in chunks:
            store(_run_chunk(model, spec, seed, s, e))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, model, spec, seed, s, e) for s, e in chunks]
            for fut in futures:
                store(fut.result())
    return tau, wrong, cens


def _summarise(tau, wrong, cens, seed: int, echo: str) -> SimulationSummary:
    n = len(tau)
    errors = int(np.count_nonzero(wrong & ~cens))
    censored = int(np.count_nonzero(cens))
    p = errors / n
    q = np.quantile(tau.astype(float), [0.5, 0.9, 0.99])
    return SimulationSummary(
        error_prob=p,
        error_prob_stderr=math.sqrt(p * (1.0 - p) / n),
        error_prob_upper=3.0 / n if errors == 0 else p,
        mean_tau=float(np.mean(tau)),
        tau_quantiles={50: float(q[0]), 90: float(q[1]), 99: float(q[2])},
        censored_frac=censored / n,
        replications=n,
        errors=errors,
        censored=censored,
        seed=seed,
        config_echo=echo,
    )


def _validate(model: BanditModel, spec: StrategySpec) -> None:
    # fail fast in the parent on bad pairings
    make_runner(spec, model)


def simulate(config: SimulationConfig, workers: int = 1, progress: Progress | None = None) -> SimulationSummary:
    """Run ``config.replications`` executions of the strategy (ignores ``sweep``).

    ``error_prob`` counts wrong recommendations among runs that stopped;
    censored runs are only reflected in ``censored_frac``.
    """
    _validate(config.model, config.strategy)
    arrays = _collect(config.model, config.strategy, config.seed, config.replications, workers, progress)
    return _summarise(*arrays, config.seed, config.digest())


def sweep(config: SimulationConfig, workers: int = 1, progress: Progress | None = None) -> list[SweepPoint]:
    """One summary per sweep value; a failing point records its error and the sweep goes on."""
    if not config.sweep:
        raise ValueError("config has no sweep values")
    points = []
    for value in config.sweep:
        try:
            spec = config.point(value)
            _validate(config.model, spec)
            arrays = _collect(config.model, spec, config.seed, config.replications, workers, progress)
            points.append(SweepPoint(value, _summarise(*arrays, config.seed, config.digest())))
        except (StrategyError, ValueError, ArithmeticError) as exc:
            points.append(SweepPoint(value, None, f"{type(exc).__name__}: {exc}"))
    return points


def natural_param(spec: StrategySpec) -> float:
    if isinstance(spec, FixedBudgetStatic):
        return spec.t
    return strategy_delta(spec)


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def sweep_csv(points: Iterable[SweepPoint], replications: int, seed: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for pt in points:
        if pt.summary is not None:
            row = pt.summary.row(pt.param)
        else:
            row = dict.fromkeys(CSV_COLUMNS, "")
            row.update(sweep_param=pt.param, replications=replications, seed=seed, error=pt.error)
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def theoretical_curve(model: BanditModel, x_values: Sequence[float]) -> list[tuple[float, float]]:
    """``(x, exp(-x / kappa_B))`` pairs."""
    kappa = complexities(model).kappa_B
    return [(float(x), math.exp(-float(x) / kappa)) for x in x_values]


def log_error_slope(xs: Sequence[float], error_probs: Sequence[float]) -> float:
    """Least-squares slope of ``log(error)`` against ``xs``; all errors must be positive."""
    p = np.asarray(error_probs, dtype=float)
    if np.any(p <= 0):
        raise ValueError("log-error regression needs strictly positive error estimates")
    return float(np.polyfit(np.asarray(xs, dtype=float), np.log(p), 1)[0])


def is_sequential(spec: StrategySpec) -> bool:
    return isinstance(spec, SEQUENTIAL)
