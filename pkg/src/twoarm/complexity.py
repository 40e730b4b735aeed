"""Information-theoretic complexity of two-armed best-arm identification.

For a model with ``mu1 > mu2`` the four constants are infima over alternative
models ``(nu1', nu2')`` in which the ordering of the means is reversed:

* ``c_star``: ``max{KL(nu1', nu1), KL(nu2', nu2)}`` (fixed-budget, Chernoff information),
* ``c_lower_star``: ``max{KL(nu1, nu1'), KL(nu2, nu2')}`` (fixed-confidence),
* ``i_star`` / ``i_lower_star``: the same with the average in place of the max
  (strategies restricted to uniform sampling).

Closed forms are used for Gaussian arms, bisection in natural-parameter space
for exponential families, and :func:`brute_force_complexities` evaluates all
four by grid search as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.special import expit, logit

from .arms import BanditModel, ExpFamilyArm, GaussianArm, bernoulli_d

__all__ = [
    "ComplexityReport",
    "ConvergenceError",
    "brute_force_complexities",
    "chernoff_info",
    "complexities",
    "g_alpha",
    "gaussian_complexities",
    "optimal_alpha",
    "reverse_chernoff",
    "uniform_complexities",
]

DEFAULT_TOL = 1e-10
MAX_BISECTION_ITER = 200


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, bracket: tuple[float, float]):
        super().__init__(f"{message} (bracket=[{bracket[0]!r}, {bracket[1]!r}])")
        self.bracket = bracket


@dataclass(frozen=True)
class ComplexityReport:
    c_star: float
    c_lower_star: float
    i_star: float
    i_lower_star: float
    optimal_alpha: float
    theta_star: float | None = None
    theta_lower_star: float | None = None

    @property
    def kappa_B(self) -> float:
        return 1.0 / self.c_star

    @property
    def kappa_C_lower(self) -> float:
        return 1.0 / self.c_lower_star

    def as_dict(self) -> dict[str, float | None]:
        out = asdict(self)
        out["kappa_B"] = self.kappa_B
        out["kappa_C_lower"] = self.kappa_C_lower
        return out


def _require_exp_family(model: BanditModel) -> tuple[float, float]:
    if not isinstance(model.arm1, ExpFamilyArm):
        raise TypeError("this quantity is defined here for exponential-family models only")
    th1, th2 = model.arm1.natural_param, model.arm2.natural_param
    if th1 == th2:
        raise ValueError("natural parameters must differ")
    return th1, th2


def _bisect(h: Callable[[float], float], lo: float, hi: float, accept: Callable[[float, float], bool]) -> float:
    """Root of a continuous monotone ``h`` on ``[lo, hi]`` with a sign change.

    Halves the bracket until ``h`` vanishes or the bracket stops shrinking in
    floating point, then checks ``accept(x, h(x))``.
    """
    h_lo = h(lo)
    if h_lo == 0.0:
        return lo
    h_hi = h(hi)
    if h_hi == 0.0:
        return hi
    if (h_lo > 0) == (h_hi > 0):
        raise ConvergenceError("no sign change on bracket", (lo, hi))
    best, best_h = (lo, h_lo) if abs(h_lo) < abs(h_hi) else (hi, h_hi)
    for _ in range(MAX_BISECTION_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        h_mid = h(mid)
        if abs(h_mid) < abs(best_h):
            best, best_h = mid, h_mid
        if h_mid == 0.0:
            break
        if (h_mid > 0) == (h_lo > 0):
            lo, h_lo = mid, h_mid
        else:
            hi = mid
    if not accept(best, best_h):
        raise ConvergenceError("bisection did not reach tolerance", (lo, hi))
    return best


def _bracket(th1: float, th2: float) -> tuple[float, float]:
    lo, hi = min(th1, th2), max(th1, th2)
    eps = 1e-12 * (hi - lo)
    return lo + eps, hi - eps


def chernoff_info(model: BanditModel, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Point ``theta*`` with ``K(theta*, theta1) = K(theta*, theta2)`` and the common value.

    The common value is the Chernoff information ``K*(theta1, theta2)``.
    """
    th1, th2 = _require_exp_family(model)
    if not tol > 0:
        raise ValueError("tol must be positive")
    K = model.arm1.family.divergence

    def h(theta: float) -> float:
        return K(theta, th1) - K(theta, th2)

    theta = _bisect(h, *_bracket(th1, th2), lambda x, hx: abs(hx) <= tol * (1 + abs(K(x, th1))))
    return theta, K(theta, th1)


def reverse_chernoff(model: BanditModel, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Point ``theta_*`` with ``K(theta1, theta_*) = K(theta2, theta_*)`` and the common value."""
    th1, th2 = _require_exp_family(model)
    if not tol > 0:
        raise ValueError("tol must be positive")
    K = model.arm1.family.divergence

    def h(theta: float) -> float:
        return K(th1, theta) - K(th2, theta)

    theta = _bisect(h, *_bracket(th1, th2), lambda x, hx: abs(hx) <= tol * (1 + abs(K(th1, x))))
    return theta, K(th1, theta)


def gaussian_complexities(model: BanditModel) -> ComplexityReport:
    if not model.is_gaussian:
        raise TypeError("gaussian_complexities needs a Gaussian model")
    gap2 = (model.arm1.mean - model.arm2.mean) ** 2
    if gap2 == 0.0:
        raise ValueError("zero gap")
    s1, s2 = model.arm1.sd, model.arm2.sd
    c = gap2 / (2.0 * (s1 + s2) ** 2)
    i = gap2 / (4.0 * (model.arm1.variance + model.arm2.variance))
    return ComplexityReport(
        c_star=c, c_lower_star=c, i_star=i, i_lower_star=i, optimal_alpha=s1 / (s1 + s2)
    )


def uniform_complexities(model: BanditModel) -> tuple[float, float]:
    """``(i_star, i_lower_star)``: best exponents reachable with uniform sampling.

    For exponential families the infima sit at a common alternative: the
    natural-parameter midpoint for ``i_star`` and the mean midpoint for
    ``i_lower_star``.
    """
    if model.is_gaussian:
        r = gaussian_complexities(model)
        return r.i_star, r.i_lower_star
    th1, th2 = _require_exp_family(model)
    fam = model.arm1.family
    K = fam.divergence
    mid = 0.5 * (th1 + th2)
    i_star = 0.5 * (K(mid, th1) + K(mid, th2))
    m = fam.mean_inverse(0.5 * (model.arm1.mean + model.arm2.mean))
    i_lower = 0.5 * (K(th1, m) + K(th2, m))
    return i_star, i_lower


def g_alpha(alpha: float, model: BanditModel) -> float:
    """Error exponent of the static strategy giving a fraction ``alpha`` of samples to arm 1.

    ``alpha K(theta_a, theta1) + (1 - alpha) K(theta_a, theta2)`` with
    ``theta_a = alpha theta1 + (1 - alpha) theta2``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    th1, th2 = _require_exp_family(model)
    K = model.arm1.family.divergence
    mix = alpha * th1 + (1.0 - alpha) * th2
    return alpha * K(mix, th1) + (1.0 - alpha) * K(mix, th2)


def optimal_alpha(model: BanditModel) -> float:
    """Fraction of the budget allocated to arm 1 by the optimal static strategy."""
    if model.is_gaussian:
        s1, s2 = model.arm1.sd, model.arm2.sd
        return s1 / (s1 + s2)
    th1, th2 = _require_exp_family(model)
    theta_star, _ = chernoff_info(model)
    return (theta_star - th2) / (th1 - th2)


def complexities(model: BanditModel, tol: float = DEFAULT_TOL) -> ComplexityReport:
    if model.is_gaussian:
        return gaussian_complexities(model)
    th1, th2 = _require_exp_family(model)
    theta_star, k_star = chernoff_info(model, tol)
    theta_lower, k_lower = reverse_chernoff(model, tol)
    i_star, i_lower = uniform_complexities(model)
    return ComplexityReport(
        c_star=k_star,
        c_lower_star=k_lower,
        i_star=i_star,
        i_lower_star=i_lower,
        optimal_alpha=(theta_star - th2) / (th1 - th2),
        theta_star=theta_star,
        theta_lower_star=theta_lower,
    )


# --- grid-search oracle -----------------------------------------------------

_BERNOULLI_GRID = (1e-4, 1.0 - 1e-4)
_REFINE_LEVELS = 3
_WINDOW = 4


def _grid_infimum(f, g, lo, hi, n, combine, reversed_order_le, refine):
    """Grid minimum of ``combine(f(a), g(b))`` over ``lo <= a, b <= hi``.

    ``reversed_order_le`` restricts to ``a <= b`` (else ``a >= b``). Each
    refinement level re-grids a window of a few cells around the incumbent.
    """
    a_lo, a_hi, b_lo, b_hi = lo, hi, lo, hi
    best = (math.inf, lo, hi)
    for _ in range(refine + 1):
        a = np.linspace(a_lo, a_hi, n)
        b = np.linspace(b_lo, b_hi, n)
        vals = combine(f(a)[:, None], g(b)[None, :])
        mask = a[:, None] <= b[None, :] if reversed_order_le else a[:, None] >= b[None, :]
        vals = np.where(mask, vals, np.inf)
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        if vals[i, j] < best[0]:
            best = (float(vals[i, j]), float(a[i]), float(b[j]))
        _, ai, bj = best
        ha = (a_hi - a_lo) / (n - 1)
        hb = (b_hi - b_lo) / (n - 1)
        a_lo, a_hi = max(lo, ai - _WINDOW * ha), min(hi, ai + _WINDOW * ha)
        b_lo, b_hi = max(lo, bj - _WINDOW * hb), min(hi, bj + _WINDOW * hb)
    return best


def _grid_argmax_1d(fn, lo, hi, n, refine):
    best = (-math.inf, lo)
    for _ in range(refine + 1):
        x = np.linspace(lo, hi, n)
        v = fn(x)
        k = int(np.nanargmax(v))
        if v[k] > best[0]:
            best = (float(v[k]), float(x[k]))
        h = (hi - lo) / (n - 1)
        lo, hi = max(lo, best[1] - _WINDOW * h), min(hi, best[1] + _WINDOW * h)
    return best


def _gauss_kl_fixed_var(m_p, m_q, var):
    return (m_p - m_q) ** 2 / (2.0 * var)


def brute_force_complexities(
    model: BanditModel, grid_resolution: int = 2000, refine: int = _REFINE_LEVELS
) -> ComplexityReport:
    """All four constants by exhaustive search over alternative models.

    Alternatives are gridded in mean space (Bernoulli over ``(1e-4, 1 - 1e-4)``;
    Gaussian with the arm variances held fixed, over the mean range widened by
    three gaps on each side), restricted to the reversed ordering, and the
    search window is re-gridded ``refine`` times around the incumbent. The
    optimal allocation is the argmax of the static-strategy exponent on a grid.
    Uses no root finding and no closed form for the infima.
    """
    if grid_resolution < 100:
        raise ValueError("grid_resolution must be >= 100")
    mu1, mu2 = model.means
    order_le = mu1 > mu2
    n = int(grid_resolution)
    if model.is_gaussian:
        v1, v2 = model.arm1.variance, model.arm2.variance
        gap = abs(mu1 - mu2)
        lo, hi = min(mu1, mu2) - 3 * gap, max(mu1, mu2) + 3 * gap
        div_alt_first_1 = lambda a: _gauss_kl_fixed_var(a, mu1, v1)  # noqa: E731
        div_alt_first_2 = lambda b: _gauss_kl_fixed_var(b, mu2, v2)  # noqa: E731
        div_alt_second_1 = div_alt_first_1
        div_alt_second_2 = div_alt_first_2
        d2 = gap**2

        def exponent(alpha):
            with np.errstate(divide="ignore"):
                return d2 / (2.0 * (v1 / alpha + v2 / (1.0 - alpha)))

    elif model.is_bernoulli:
        lo, hi = _BERNOULLI_GRID
        div_alt_first_1 = lambda a: bernoulli_d(a, mu1)  # noqa: E731
        div_alt_first_2 = lambda b: bernoulli_d(b, mu2)  # noqa: E731
        div_alt_second_1 = lambda a: bernoulli_d(mu1, a)  # noqa: E731
        div_alt_second_2 = lambda b: bernoulli_d(mu2, b)  # noqa: E731
        th1, th2 = logit(mu1), logit(mu2)

        def exponent(alpha):
            p = expit(alpha * th1 + (1.0 - alpha) * th2)
            return alpha * bernoulli_d(p, mu1) + (1.0 - alpha) * bernoulli_d(p, mu2)

    else:
        raise NotImplementedError("grid oracle supports Gaussian and Bernoulli models")

    mean2 = lambda x, y: 0.5 * (x + y)  # noqa: E731
    c_star, a_c, b_c = _grid_infimum(div_alt_first_1, div_alt_first_2, lo, hi, n, np.maximum, order_le, refine)
    c_low, a_l, b_l = _grid_infimum(div_alt_second_1, div_alt_second_2, lo, hi, n, np.maximum, order_le, refine)
    i_star, _, _ = _grid_infimum(div_alt_first_1, div_alt_first_2, lo, hi, n, mean2, order_le, refine)
    i_low, _, _ = _grid_infimum(div_alt_second_1, div_alt_second_2, lo, hi, n, mean2, order_le, refine)
    _, alpha = _grid_argmax_1d(exponent, 1.0 / n, 1.0 - 1.0 / n, n, refine)

    theta_star = theta_lower = None
    if model.is_bernoulli:
        theta_star = float(logit(0.5 * (a_c + b_c)))
        theta_lower = float(logit(0.5 * (a_l + b_l)))
    return ComplexityReport(
        c_star=c_star,
        c_lower_star=c_low,
        i_star=i_star,
        i_lower_star=i_low,
        optimal_alpha=alpha,
        theta_star=theta_star,
        theta_lower_star=theta_lower,
    )
