"""Sampling, stopping and recommendation rules for two-armed best-arm identification.

Each strategy is a frozen dataclass; :func:`make_runner` binds it to a model
(precomputing the deterministic stopping boundary) and returns a callable that
executes one run on a random stream. The inner loops live in
:mod:`twoarm.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Any, Callable, Mapping, Union

import numpy as np

from . import kernels
from .arms import BanditModel, bernoulli_d
from .complexity import complexities
from .complexity import optimal_alpha as _optimal_alpha
from .rates import ExplorationRate, RateKind, beta_values

__all__ = [
    "SPRT",
    "AlphaElimination",
    "BernoulliKLStopping",
    "FixedBudgetStatic",
    "RunOutcome",
    "StrategySpec",
    "UniformElimination",
    "default_cap",
    "make_runner",
    "optimal_budget_split",
    "run",
    "run_alpha_elimination",
    "run_bernoulli_kl_stopping",
    "run_fixed_budget",
    "run_sprt",
    "run_uniform_elimination",
    "strategy_from_config",
    "strategy_to_config",
]

MIN_DEFAULT_CAP = 1_000_000


class StrategyError(ValueError):
    """A strategy cannot be run on the given model."""


@dataclass(frozen=True)
class RunOutcome:
    tau: int
    n1: int
    n2: int
    recommended: int
    correct: bool
    censored: bool


@dataclass(frozen=True)
class FixedBudgetStatic:
    """Draw ``n1`` samples of arm 1, then ``t - n1`` of arm 2.

    With ``n1=None`` the split follows ``split``: ``"uniform"`` gives
    ``ceil(t/2)``, ``"optimal"`` uses :func:`optimal_budget_split`.
    """

    t: int
    n1: int | None = None
    split: str = "uniform"

    def __post_init__(self) -> None:
        if self.t < 2:
            raise StrategyError(f"budget must be >= 2, got {self.t}")
        if self.n1 is not None and not 1 <= self.n1 <= self.t - 1:
            raise StrategyError(f"n1 must lie in [1, t-1], got {self.n1}")
        if self.split not in ("uniform", "optimal"):
            raise StrategyError(f"unknown split rule {self.split!r}")


@dataclass(frozen=True)
class UniformElimination:
    rate: ExplorationRate
    cap: int | None = None


@dataclass(frozen=True)
class AlphaElimination:
    """Algorithm with deterministic schedule ``N1(t) = ceil(alpha t)``.

    ``alpha=None`` selects ``sigma1 / (sigma1 + sigma2)`` for the model.
    """

    rate: ExplorationRate
    alpha: float | None = None
    cap: int | None = None

    def __post_init__(self) -> None:
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise StrategyError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class BernoulliKLStopping:
    delta: float
    cap: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 1.0:
            raise StrategyError(f"delta must lie in (0, 1), got {self.delta}")


@dataclass(frozen=True)
class SPRT:
    delta: float
    known_means: tuple[float, float]
    cap: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "known_means", tuple(float(m) for m in self.known_means))
        if not 0.0 < self.delta < 1.0:
            raise StrategyError(f"delta must lie in (0, 1), got {self.delta}")
        if len(self.known_means) != 2 or self.known_means[0] == self.known_means[1]:
            raise StrategyError("SPRT needs two distinct known means")


StrategySpec = Union[FixedBudgetStatic, UniformElimination, AlphaElimination, BernoulliKLStopping, SPRT]
SEQUENTIAL = (UniformElimination, AlphaElimination, BernoulliKLStopping, SPRT)


def strategy_delta(spec: StrategySpec) -> float | None:
    if isinstance(spec, (UniformElimination, AlphaElimination)):
        return spec.rate.delta
    if isinstance(spec, (BernoulliKLStopping, SPRT)):
        return spec.delta
    return None


def with_delta(spec: StrategySpec, delta: float) -> StrategySpec:
    if isinstance(spec, (UniformElimination, AlphaElimination)):
        return replace(spec, rate=ExplorationRate(spec.rate.kind, delta))
    if isinstance(spec, (BernoulliKLStopping, SPRT)):
        return replace(spec, delta=delta)
    raise StrategyError("fixed-budget strategies have no risk parameter")


def with_budget(spec: StrategySpec, t: int) -> StrategySpec:
    if not isinstance(spec, FixedBudgetStatic):
        raise StrategyError("only fixed-budget strategies take a budget")
    return FixedBudgetStatic(int(t), None, spec.split)


def default_cap(model: BanditModel, delta: float) -> int:
    """``max(10^6, 100 kappa log(1/delta))`` rounded up to an even integer."""
    kappa = complexities(model).kappa_C_lower
    cap = max(MIN_DEFAULT_CAP, math.ceil(100.0 * kappa * math.log(1.0 / delta)))
    return cap + (cap % 2)


def _resolve_cap(cap: int | None, model: BanditModel, delta: float, even: bool) -> int:
    if cap is None:
        return default_cap(model, delta)
    cap = int(cap)
    if cap < 2:
        raise StrategyError(f"cap must be >= 2, got {cap}")
    if even and cap % 2:
        raise StrategyError(f"cap must be even for pair-sampling rules, got {cap}")
    return cap


def _ceil_guarded(x: float) -> int:
    # absorb rounding noise such as 0.5000000000000002 * 100
    return math.ceil(x - 1e-9 * max(1.0, abs(x)))


def optimal_budget_split(model: BanditModel, t: int) -> int:
    """Number of the ``t`` samples given to arm 1 by the optimal static strategy."""
    if t < 2:
        raise StrategyError(f"budget must be >= 2, got {t}")
    if model.gap == 0.0:
        raise StrategyError("zero gap")
    if model.is_gaussian:
        s1, s2 = model.arm1.sd, model.arm2.sd
        n1 = _ceil_guarded(s1 * t / (s1 + s2))
    else:
        ordered = model if model.best_arm == 1 else model.swapped()
        n_best = _ceil_guarded(_optimal_alpha(ordered) * t)
        n1 = n_best if model.best_arm == 1 else t - n_best
    return min(max(n1, 1), t - 1)


def _require_common_variance(model: BanditModel, what: str) -> float:
    if not model.is_gaussian:
        raise StrategyError(f"{what} needs a Gaussian model")
    if model.arm1.variance != model.arm2.variance:
        raise StrategyError(
            f"{what} assumes a common variance; use AlphaElimination for unequal variances"
        )
    return model.arm1.variance


def _outcome(model: BanditModel, tau: int, n1: int, recommended: int, stopped: bool) -> RunOutcome:
    return RunOutcome(
        tau=int(tau),
        n1=int(n1),
        n2=int(tau - n1),
        recommended=recommended,
        correct=recommended == model.best_arm,
        censored=not stopped,
    )


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=8)
def _pair_boundary(rate: ExplorationRate, variance: float, cap: int) -> np.ndarray:
    # entry k: sqrt(2 sigma^2 t beta(t)) at t = 2k
    k = np.arange(cap // 2 + 1, dtype=float)
    thr = np.full(k.shape, np.inf)
    t = 2.0 * k[1:]
    thr[1:] = np.sqrt(2.0 * variance * t * beta_values(rate, t))
    return _readonly(thr)


@lru_cache(maxsize=8)
def _alpha_boundary(rate: ExplorationRate, alpha: float, var1: float, var2: float, cap: int) -> np.ndarray:
    # entry t: sqrt(2 sigma_t^2(alpha) beta(t)); inf while an arm is unsampled
    t = np.arange(cap + 1, dtype=float)
    n1 = np.ceil(alpha * t)
    n2 = t - n1
    thr = np.full(t.shape, np.inf)
    ok = (n1 > 0) & (n2 > 0) & (t >= rate.min_t)
    var_t = var1 / n1[ok] + var2 / n2[ok]
    thr[ok] = np.sqrt(2.0 * var_t * beta_values(rate, t[ok]))
    return _readonly(thr)


@lru_cache(maxsize=8)
def _bernoulli_threshold(delta: float, cap: int) -> np.ndarray:
    # entry k: log((log t + 1) / delta) at t = 2k
    k = np.arange(cap // 2 + 1, dtype=float)
    thr = np.full(k.shape, np.inf)
    thr[1:] = np.log((np.log(2.0 * k[1:]) + 1.0) / delta)
    return _readonly(thr)


@lru_cache(maxsize=8)
def _constant_table(value: float, size: int) -> np.ndarray:
    thr = np.full(size, value)
    thr[0] = np.inf
    return _readonly(thr)


Runner = Callable[[np.random.Generator], RunOutcome]


def make_runner(spec: StrategySpec, model: BanditModel) -> Runner:
    """Validate ``spec`` against ``model`` and return a one-run executor."""
    if isinstance(spec, FixedBudgetStatic):
        return _fixed_budget_runner(model, spec.t, _budget_n1(spec, model))
    if isinstance(spec, UniformElimination):
        return _uniform_elimination_runner(model, spec.rate, spec.cap)
    if isinstance(spec, AlphaElimination):
        alpha = spec.alpha if spec.alpha is not None else _gaussian_alpha(model)
        return _alpha_elimination_runner(model, alpha, spec.rate, spec.cap)
    if isinstance(spec, BernoulliKLStopping):
        return _bernoulli_kl_runner(model, spec.delta, spec.cap)
    if isinstance(spec, SPRT):
        return _sprt_runner(model, spec.delta, spec.known_means, spec.cap)
    raise TypeError(f"unknown strategy spec {spec!r}")


def run(spec: StrategySpec, model: BanditModel, rng: np.random.Generator) -> RunOutcome:
    return make_runner(spec, model)(rng)


def _budget_n1(spec: FixedBudgetStatic, model: BanditModel) -> int:
    if spec.n1 is not None:
        return spec.n1
    if spec.split == "optimal":
        return optimal_budget_split(model, spec.t)
    return math.ceil(spec.t / 2)


def _gaussian_alpha(model: BanditModel) -> float:
    if not model.is_gaussian:
        raise StrategyError("alpha-elimination needs a Gaussian model")
    s1, s2 = model.arm1.sd, model.arm2.sd
    return s1 / (s1 + s2)


def _arm_params(model: BanditModel) -> tuple[int, float, float, float, float]:
    if model.is_gaussian:
        return 0, model.arm1.mean, model.arm1.sd, model.arm2.mean, model.arm2.sd
    if model.is_bernoulli:
        return 1, model.arm1.mean, 0.0, model.arm2.mean, 0.0
    raise StrategyError(f"no sampler for family {model.family_name}")


def _fixed_budget_runner(model: BanditModel, t: int, n1: int) -> Runner:
    if not 1 <= n1 <= t - 1:
        raise StrategyError(f"n1 must lie in [1, t-1], got {n1} for t={t}")
    params = _arm_params(model)
    n2 = t - n1
    static_sums = kernels.static_sums

    def runner(rng: np.random.Generator) -> RunOutcome:
        s1, s2 = static_sums(rng, *params, n1, n2)
        rec = 1 if s1 / n1 >= s2 / n2 else 2
        return _outcome(model, t, n1, rec, True)

    return runner


def _uniform_elimination_runner(model: BanditModel, rate: ExplorationRate, cap: int | None) -> Runner:
    var = _require_common_variance(model, "uniform elimination")
    cap = _resolve_cap(cap, model, rate.delta, even=True)
    thr = _pair_boundary(rate, var, cap)
    _, m1, sd1, m2, sd2 = _arm_params(model)
    pair_gaussian = kernels.pair_gaussian

    def runner(rng: np.random.Generator) -> RunOutcome:
        tau, d, stopped = pair_gaussian(rng, m1, sd1, m2, sd2, thr, cap)
        return _outcome(model, tau, tau // 2, 1 if d >= 0 else 2, stopped)

    return runner


def _alpha_elimination_runner(model: BanditModel, alpha: float, rate: ExplorationRate, cap: int | None) -> Runner:
    if not model.is_gaussian:
        raise StrategyError("alpha-elimination needs a Gaussian model")
    if not 0.0 < alpha < 1.0:
        raise StrategyError(f"alpha must lie in (0, 1), got {alpha}")
    cap = _resolve_cap(cap, model, rate.delta, even=False)
    thr = _alpha_boundary(rate, float(alpha), model.arm1.variance, model.arm2.variance, cap)
    _, m1, sd1, m2, sd2 = _arm_params(model)
    alpha_gaussian = kernels.alpha_gaussian

    def runner(rng: np.random.Generator) -> RunOutcome:
        tau, n1, s1, s2, stopped = alpha_gaussian(rng, m1, sd1, m2, sd2, alpha, thr, cap)
        n2 = tau - n1
        mean1 = s1 / n1 if n1 else -math.inf
        mean2 = s2 / n2 if n2 else -math.inf
        return _outcome(model, tau, n1, 1 if mean1 >= mean2 else 2, stopped)

    return runner


def _bernoulli_kl_runner(model: BanditModel, delta: float, cap: int | None) -> Runner:
    if not model.is_bernoulli:
        raise StrategyError("the KL stopping rule needs a Bernoulli model")
    cap = _resolve_cap(cap, model, delta, even=True)
    thr = _bernoulli_threshold(delta, cap)
    p1, p2 = model.means
    pair_bernoulli_kl = kernels.pair_bernoulli_kl

    def runner(rng: np.random.Generator) -> RunOutcome:
        tau, c1, c2, stopped = pair_bernoulli_kl(rng, p1, p2, thr, cap)
        return _outcome(model, tau, tau // 2, 1 if c1 >= c2 else 2, stopped)

    return runner


def _sprt_runner(model: BanditModel, delta: float, known_means: tuple[float, float], cap: int | None) -> Runner:
    var = _require_common_variance(model, "SPRT")
    k1, k2 = known_means
    if k1 == k2:
        raise StrategyError("SPRT needs two distinct known means")
    cap = _resolve_cap(cap, model, delta, even=True)
    # |(k1 - k2)(S1 - S2)| / sigma^2 > log(1/delta)  <=>  |S1 - S2| > bound
    bound = var * math.log(1.0 / delta) / abs(k1 - k2)
    thr = _constant_table(bound, cap // 2 + 1)
    _, m1, sd1, m2, sd2 = _arm_params(model)
    pair_gaussian = kernels.pair_gaussian
    arm1_higher = k1 > k2

    def runner(rng: np.random.Generator) -> RunOutcome:
        tau, d, stopped = pair_gaussian(rng, m1, sd1, m2, sd2, thr, cap)
        llr = (k1 - k2) * d / var
        # llr > 0 favours "arm 1 has mean k1"
        rec = 1 if (llr >= 0) == arm1_higher else 2
        return _outcome(model, tau, tau // 2, rec, stopped)

    return runner


def run_fixed_budget(model: BanditModel, t: int, n1: int, rng: np.random.Generator) -> RunOutcome:
    return _fixed_budget_runner(model, int(t), int(n1))(rng)


def run_uniform_elimination(
    model: BanditModel, rate: ExplorationRate, cap: int | None, rng: np.random.Generator
) -> RunOutcome:
    return _uniform_elimination_runner(model, rate, cap)(rng)


def run_alpha_elimination(
    model: BanditModel, alpha: float, rate: ExplorationRate, cap: int | None, rng: np.random.Generator
) -> RunOutcome:
    return _alpha_elimination_runner(model, alpha, rate, cap)(rng)


def run_bernoulli_kl_stopping(
    model: BanditModel, delta: float, cap: int | None, rng: np.random.Generator
) -> RunOutcome:
    return _bernoulli_kl_runner(model, delta, cap)(rng)


def run_sprt(
    model: BanditModel,
    delta: float,
    known_means: tuple[float, float],
    cap: int | None,
    rng: np.random.Generator,
) -> RunOutcome:
    return _sprt_runner(model, delta, tuple(known_means), cap)(rng)


def bernoulli_stopping_statistic(x: float, y: float, t: int) -> float:
    """``t * I(x, y)`` for empirical means ``x, y`` after ``t/2`` pairs."""
    if x == y:
        return 0.0
    m = 0.5 * (x + y)
    return t * 0.5 * (bernoulli_d(x, m) + bernoulli_d(y, m))


# --- config files -----------------------------------------------------------

_KINDS = {
    "fixed_budget": FixedBudgetStatic,
    "uniform_elimination": UniformElimination,
    "alpha_elimination": AlphaElimination,
    "bernoulli_kl": BernoulliKLStopping,
    "sprt": SPRT,
}


def strategy_from_config(cfg: Mapping[str, Any]) -> StrategySpec:
    """Parse a strategy config.

    Examples::

        {"kind": "fixed_budget", "t": 40, "split": "uniform"}
        {"kind": "uniform_elimination", "rate": "improved_lil", "delta": 0.1}
        {"kind": "alpha_elimination", "rate": "alpha_elim", "delta": 0.1, "alpha": 0.25}
        {"kind": "bernoulli_kl", "delta": 0.1}
        {"kind": "sprt", "delta": 0.001, "known_means": [0.5, 0.0]}
    """
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    cfg.pop("sweep", None)
    if kind not in _KINDS:
        raise StrategyError(f"unknown strategy kind {kind!r}; expected one of {sorted(_KINDS)}")
    cap = cfg.pop("cap", None)
    try:
        if kind == "fixed_budget":
            spec: StrategySpec = FixedBudgetStatic(int(cfg.pop("t")), cfg.pop("n1", None), cfg.pop("split", "uniform"))
        elif kind in ("uniform_elimination", "alpha_elimination"):
            rate = ExplorationRate(RateKind(cfg.pop("rate")), float(cfg.pop("delta")))
            if kind == "uniform_elimination":
                spec = UniformElimination(rate, cap)
            else:
                alpha = cfg.pop("alpha", None)
                alpha = None if alpha in (None, "optimal") else float(alpha)
                spec = AlphaElimination(rate, alpha, cap)
        elif kind == "bernoulli_kl":
            spec = BernoulliKLStopping(float(cfg.pop("delta")), cap)
        else:
            spec = SPRT(float(cfg.pop("delta")), tuple(cfg.pop("known_means")), cap)
    except (KeyError, TypeError) as exc:
        raise StrategyError(f"invalid {kind} config: missing or bad field {exc}") from exc
    if cfg:
        raise StrategyError(f"unknown fields for {kind}: {sorted(cfg)}")
    return spec


def strategy_to_config(spec: StrategySpec) -> dict[str, Any]:
    if isinstance(spec, FixedBudgetStatic):
        return {"kind": "fixed_budget", "t": spec.t, "n1": spec.n1, "split": spec.split}
    if isinstance(spec, UniformElimination):
        return {"kind": "uniform_elimination", "rate": spec.rate.kind.value, "delta": spec.rate.delta, "cap": spec.cap}
    if isinstance(spec, AlphaElimination):
        return {
            "kind": "alpha_elimination",
            "rate": spec.rate.kind.value,
            "delta": spec.rate.delta,
            "alpha": spec.alpha,
            "cap": spec.cap,
        }
    if isinstance(spec, BernoulliKLStopping):
        return {"kind": "bernoulli_kl", "delta": spec.delta, "cap": spec.cap}
    return {"kind": "sprt", "delta": spec.delta, "known_means": list(spec.known_means), "cap": spec.cap}
