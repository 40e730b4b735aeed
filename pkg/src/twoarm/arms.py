"""Arm distributions, sampling and Kullback-Leibler divergences.

Two families are supported: Gaussian arms with known variance, and arms from a
canonical one-parameter exponential family ``f_theta(x) = A(x) exp(theta x - b(theta))``
parametrised by the natural parameter. Bernoulli is the shipped exponential family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Union

import numpy as np
from scipy.special import expit, logit

__all__ = [
    "BERNOULLI",
    "ArmSpec",
    "BanditModel",
    "ExpFamilyArm",
    "ExpFamilyDescriptor",
    "FamilyMismatchError",
    "GaussianArm",
    "bernoulli",
    "bernoulli_d",
    "gaussian",
    "kl",
    "mean",
    "model_from_config",
    "model_to_config",
    "sample",
]


class FamilyMismatchError(ValueError):
    """Raised when two arms from incompatible families are combined."""


@dataclass(frozen=True)
class ExpFamilyDescriptor:
    """A canonical one-parameter exponential family.

    Attributes:
        name: identifier used in config files.
        log_partition: ``b(theta)``.
        mean_fn: ``mu(theta) = b'(theta)``, strictly increasing on the interval.
        mean_inverse: inverse of ``mean_fn``.
        param_interval: open interval of admissible natural parameters.
    """

    name: str
    log_partition: Callable[[float], float]
    mean_fn: Callable[[float], float]
    mean_inverse: Callable[[float], float]
    param_interval: tuple[float, float]

    def contains(self, theta: float) -> bool:
        lo, hi = self.param_interval
        return lo < theta < hi

    def divergence(self, theta1: float, theta2: float) -> float:
        """``K(theta1, theta2) = mu(theta1)(theta1 - theta2) - b(theta1) + b(theta2)``."""
        value = (
            self.mean_fn(theta1) * (theta1 - theta2)
            - self.log_partition(theta1)
            + self.log_partition(theta2)
        )
        # rounding can push exact zeros slightly negative
        return max(float(value), 0.0)


def _bernoulli_b(theta: float) -> float:
    return float(np.logaddexp(0.0, theta))


BERNOULLI = ExpFamilyDescriptor(
    name="bernoulli",
    log_partition=_bernoulli_b,
    mean_fn=lambda theta: float(expit(theta)),
    mean_inverse=lambda mu: float(logit(mu)),
    param_interval=(-math.inf, math.inf),
)

FAMILIES: dict[str, ExpFamilyDescriptor] = {BERNOULLI.name: BERNOULLI}


@dataclass(frozen=True)
class GaussianArm:
    mean: float
    variance: float

    def __post_init__(self) -> None:
        if not self.variance > 0:
            raise ValueError(f"variance must be > 0, got {self.variance}")
        if not math.isfinite(self.mean):
            raise ValueError(f"mean must be finite, got {self.mean}")

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class ExpFamilyArm:
    natural_param: float
    family: ExpFamilyDescriptor = BERNOULLI
    # exact mean when built from mean space, so configs round-trip bit for bit
    mean_value: float | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.family.contains(self.natural_param):
            raise ValueError(
                f"natural parameter {self.natural_param} outside {self.family.param_interval}"
            )

    @property
    def mean(self) -> float:
        if self.mean_value is not None:
            return self.mean_value
        return self.family.mean_fn(self.natural_param)


ArmSpec = Union[GaussianArm, ExpFamilyArm]


def gaussian(mu: float, sigma2: float) -> GaussianArm:
    return GaussianArm(float(mu), float(sigma2))


def bernoulli(mu: float) -> ExpFamilyArm:
    """Bernoulli arm built from its mean; stored by natural parameter."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"Bernoulli mean must lie in (0, 1), got {mu}")
    return ExpFamilyArm(BERNOULLI.mean_inverse(mu), BERNOULLI, float(mu))


def mean(arm: ArmSpec) -> float:
    return arm.mean


def sample(arm: ArmSpec, rng: np.random.Generator) -> float:
    """One draw from ``arm``.

    Gaussian draws consume one standard normal and Bernoulli draws one uniform
    double, which is the same stream consumption as the compiled kernels.
    """
    if isinstance(arm, GaussianArm):
        return arm.mean + arm.sd * rng.standard_normal()
    if arm.family is BERNOULLI:
        return 1.0 if rng.random() < arm.mean else 0.0
    raise NotImplementedError(f"no sampler for family {arm.family.name!r}")


def _gaussian_kl(p: GaussianArm, q: GaussianArm) -> float:
    return (
        0.5 * math.log(q.variance / p.variance)
        + (p.variance + (p.mean - q.mean) ** 2) / (2.0 * q.variance)
        - 0.5
    )


def kl(p: ArmSpec, q: ArmSpec) -> float:
    """KL(p, q) for two arms of the same family."""
    if isinstance(p, GaussianArm) and isinstance(q, GaussianArm):
        return max(_gaussian_kl(p, q), 0.0)
    if isinstance(p, ExpFamilyArm) and isinstance(q, ExpFamilyArm):
        if p.family is not q.family:
            raise FamilyMismatchError(f"{p.family.name} vs {q.family.name}")
        return p.family.divergence(p.natural_param, q.natural_param)
    raise FamilyMismatchError(f"cannot compare {type(p).__name__} with {type(q).__name__}")


def _xlogx_ratio(x, y):
    # x log(x/y) with the 0 log 0 = 0 convention; y == 0 < x -> inf
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0, x * (np.log(x) - np.log(y)), 0.0)
    return out


def bernoulli_d(x, y):
    """``d(x, y) = KL(B(x), B(y))`` in mean space, vectorised.

    Boundary values use the continuous extension; ``y`` in {0, 1} with ``x != y``
    yields ``inf``.
    """
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    if np.any((x_arr < 0) | (x_arr > 1) | (y_arr < 0) | (y_arr > 1)):
        raise ValueError("bernoulli_d arguments must lie in [0, 1]")
    out = _xlogx_ratio(x_arr, y_arr) + _xlogx_ratio(1.0 - x_arr, 1.0 - y_arr)
    out = np.maximum(out, 0.0)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class BanditModel:
    """An ordered pair of arms from the same family."""

    arm1: ArmSpec
    arm2: ArmSpec

    def __post_init__(self) -> None:
        if type(self.arm1) is not type(self.arm2):
            raise FamilyMismatchError("both arms must come from the same family")
        if isinstance(self.arm1, ExpFamilyArm) and self.arm1.family is not self.arm2.family:
            raise FamilyMismatchError("both arms must come from the same exponential family")
        if self.arm1.mean == self.arm2.mean:
            raise ValueError("arm means must differ")
        if self.is_bernoulli:
            for arm in (self.arm1, self.arm2):
                if not 0.0 < arm.mean < 1.0:
                    raise ValueError("Bernoulli means must lie strictly inside (0, 1)")

    @property
    def is_gaussian(self) -> bool:
        return isinstance(self.arm1, GaussianArm)

    @property
    def is_bernoulli(self) -> bool:
        return isinstance(self.arm1, ExpFamilyArm) and self.arm1.family is BERNOULLI

    @property
    def means(self) -> tuple[float, float]:
        return self.arm1.mean, self.arm2.mean

    @property
    def best_arm(self) -> int:
        return 1 if self.arm1.mean > self.arm2.mean else 2

    @property
    def gap(self) -> float:
        return abs(self.arm1.mean - self.arm2.mean)

    @property
    def family_name(self) -> str:
        return "gaussian" if self.is_gaussian else self.arm1.family.name

    def shifted(self, c: float) -> "BanditModel":
        """Gaussian model with both means translated by ``c``."""
        if not self.is_gaussian:
            raise TypeError("only Gaussian models can be translated")
        return BanditModel(
            GaussianArm(self.arm1.mean + c, self.arm1.variance),
            GaussianArm(self.arm2.mean + c, self.arm2.variance),
        )

    def swapped(self) -> "BanditModel":
        return BanditModel(self.arm2, self.arm1)


def model_from_config(cfg: Mapping[str, Any]) -> BanditModel:
    """Build a model from ``{"family": ..., "mu": [..], "sigma2": [..]}``."""
    try:
        family = str(cfg["family"]).lower()
        mu = [float(m) for m in cfg["mu"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"invalid model config: {exc}") from exc
    if len(mu) != 2:
        raise ValueError("model config needs exactly two means")
    if family == "gaussian":
        sigma2 = cfg.get("sigma2")
        if sigma2 is None or len(sigma2) != 2:
            raise ValueError("gaussian model config needs two variances in 'sigma2'")
        return BanditModel(gaussian(mu[0], sigma2[0]), gaussian(mu[1], sigma2[1]))
    if family == "bernoulli":
        return BanditModel(bernoulli(mu[0]), bernoulli(mu[1]))
    raise ValueError(f"unknown family {family!r}")


def model_to_config(model: BanditModel) -> dict[str, Any]:
    if model.is_gaussian:
        return {
            "family": "gaussian",
            "mu": [model.arm1.mean, model.arm2.mean],
            "sigma2": [model.arm1.variance, model.arm2.variance],
        }
    return {"family": model.family_name, "mu": [model.arm1.mean, model.arm2.mean]}
