"""Exploration rates ``beta(t, delta)`` and the sub-Gaussian LIL deviation bound."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ExplorationRate",
    "LIL_MIN_X",
    "RateKind",
    "beta",
    "beta_values",
    "crossing_statistic",
    "improved_rate_lhs",
    "improved_rate_valid",
    "lil_bound",
    "zeta",
]

#: smallest admissible deviation level in the LIL bound, 8 / (e - 1)^2
LIL_MIN_X = 8.0 / (math.e - 1.0) ** 2


class RateKind(str, enum.Enum):
    ROBBINS = "robbins"
    IMPROVED_LIL = "improved_lil"
    ALPHA_ELIM = "alpha_elim"
    CONJECTURED_LOGLOG = "conjectured_loglog"
    FIXED_LOG = "fixed_log"


@dataclass(frozen=True)
class ExplorationRate:
    """A named threshold function ``beta(t, delta)``.

    ``robbins``: ``(t+1)/t * log((t+1)/(2 delta))``.
    ``improved_lil``: ``log(1/delta) + 3/4 log log(1/delta) + 3/2 log(1 + log(t/2))``,
    needs ``delta < 1/e`` and ``t >= 2``.
    ``alpha_elim``: ``log(t/delta) + 2 log log(6t)``.
    ``conjectured_loglog``: ``log((log t + 1)/delta)``.
    ``fixed_log``: ``log(1/delta)``.
    """

    kind: RateKind
    delta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", RateKind(self.kind))
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.kind is RateKind.IMPROVED_LIL and not self.delta < math.exp(-1.0):
            raise ValueError(f"improved_lil rate needs delta < 1/e, got {self.delta}")

    @property
    def min_t(self) -> int:
        return 2 if self.kind is RateKind.IMPROVED_LIL else 1

    def __call__(self, t: int) -> float:
        return beta(self, t)


def _check_t(rate: ExplorationRate, t) -> None:
    if np.any(np.asarray(t) < rate.min_t):
        raise ValueError(f"{rate.kind.value} rate needs t >= {rate.min_t}")


def beta(rate: ExplorationRate, t: int) -> float:
    """Evaluate the exploration rate at a single time ``t``."""
    _check_t(rate, t)
    d = rate.delta
    kind = rate.kind
    if kind is RateKind.ROBBINS:
        return (t + 1) / t * math.log((t + 1) / (2 * d))
    if kind is RateKind.IMPROVED_LIL:
        z = math.log(1 / d)
        return z + 0.75 * math.log(z) + 1.5 * math.log(1 + math.log(t / 2))
    if kind is RateKind.ALPHA_ELIM:
        return math.log(t / d) + 2 * math.log(math.log(6 * t))
    if kind is RateKind.CONJECTURED_LOGLOG:
        return math.log((math.log(t) + 1) / d)
    return math.log(1 / d)


def beta_values(rate: ExplorationRate, t) -> np.ndarray:
    """Vectorised :func:`beta` over an integer array of times."""
    _check_t(rate, t)
    t = np.asarray(t, dtype=float)
    d = rate.delta
    kind = rate.kind
    if kind is RateKind.ROBBINS:
        return (t + 1) / t * np.log((t + 1) / (2 * d))
    if kind is RateKind.IMPROVED_LIL:
        z = math.log(1 / d)
        return z + 0.75 * math.log(z) + 1.5 * np.log(1 + np.log(t / 2))
    if kind is RateKind.ALPHA_ELIM:
        return np.log(t / d) + 2 * np.log(np.log(6 * t))
    if kind is RateKind.CONJECTURED_LOGLOG:
        return np.log((np.log(t) + 1) / d)
    return np.full(t.shape, math.log(1 / d))


_ZETA_TERMS = 100_000


def zeta(u: float, terms: int = _ZETA_TERMS) -> float:
    """Riemann zeta for real ``u > 1``.

    Partial sum over ``k < N`` (``N = terms``) plus the Euler-Maclaurin tail
    ``N^(1-u)/(u-1) + N^-u/2 + u N^(-u-1)/12`` for ``k >= N``; the neglected
    remainder is below ``u(u+1)(u+2) N^(-u-3) / 720``.
    """
    if not u > 1.0:
        raise ValueError(f"zeta diverges for u <= 1, got {u}")
    n = terms
    k = np.arange(1, n, dtype=float)
    head = float(np.sum(k ** (-u)))
    tail = n ** (1 - u) / (u - 1) + 0.5 * n ** (-u) + u * n ** (-u - 1) / 12
    return head + tail


def lil_bound(x: float, beta_exp: float) -> float:
    """Upper bound on ``P(exists t: S_t > sqrt(2 sigma^2 t (x + beta log log(e t))))``.

    Evaluates ``sqrt(e) zeta(beta (1 - 1/(2x))) (sqrt(x)/(2 sqrt 2) + 1)^beta exp(-x)``
    for sums of independent sigma-sub-Gaussian increments.
    """
    if not beta_exp > 1.0:
        raise ValueError(f"beta_exp must exceed 1, got {beta_exp}")
    if x < LIL_MIN_X:
        raise ValueError(f"x must be >= 8/(e-1)^2 = {LIL_MIN_X:.6f}, got {x}")
    u = beta_exp * (1.0 - 1.0 / (2.0 * x))
    if not u > 1.0:
        raise ValueError(f"zeta argument beta(1 - 1/(2x)) = {u} must exceed 1")
    return (
        math.sqrt(math.e)
        * zeta(u)
        * (math.sqrt(x) / (2.0 * math.sqrt(2.0)) + 1.0) ** beta_exp
        * math.exp(-x)
    )


def improved_rate_lhs(log_inv_delta: float, c: float = 0.75, d: float = 1.5) -> float:
    """Left side of the sufficient condition certifying the improved rate.

    With ``z = log(1/delta)`` and ``y = z + c log z`` this is
    ``sqrt(e) zeta(d (1 - 1/(2y))) (sqrt(y) + 2 sqrt 2)^d / ((2 sqrt 2)^d z^c)``;
    ``inf`` where the zeta argument is not above 1.
    """
    z = float(log_inv_delta)
    if not z > 1.0:
        raise ValueError(f"log(1/delta) must exceed 1 (delta < 1/e), got {z}")
    y = z + c * math.log(z)
    u = d * (1.0 - 1.0 / (2.0 * y))
    if not u > 1.0:
        return math.inf
    r8 = 2.0 * math.sqrt(2.0)
    return math.sqrt(math.e) * zeta(u) * (math.sqrt(y) + r8) ** d / (r8**d * z**c)


def improved_rate_valid(delta: float | None = None, *, log_inv_delta: float | None = None) -> bool:
    """Whether the improved LIL rate is certified delta-PAC at this risk level.

    Pass ``delta`` directly, or ``log_inv_delta`` for risk levels too small to
    represent as a float; the condition only holds once ``log(1/delta)`` exceeds
    roughly 1811.
    """
    if (delta is None) == (log_inv_delta is None):
        raise ValueError("give exactly one of delta or log_inv_delta")
    if delta is not None:
        if not 0.0 < delta < math.exp(-1.0):
            raise ValueError(f"delta must lie in (0, 1/e), got {delta}")
        log_inv_delta = -math.log(delta)
    return improved_rate_lhs(log_inv_delta) <= 1.0


def crossing_statistic(paths: np.ndarray, beta_exp: float) -> np.ndarray:
    """Per-path ``max_t [S_t^2/(2t) - beta log log(e t)]`` over times with ``S_t > 0``.

    ``paths`` holds partial sums ``S_1..S_T`` along its last axis for unit
    variance increments. A path crosses the LIL boundary at level ``x`` iff
    its statistic exceeds ``x``; paths never positive get ``-inf``.
    """
    s = np.asarray(paths, dtype=float)
    t = np.arange(1, s.shape[-1] + 1, dtype=float)
    stat = s * s / (2.0 * t) - beta_exp * np.log1p(np.log(t))
    stat = np.where(s > 0, stat, -np.inf)
    return stat.max(axis=-1)
