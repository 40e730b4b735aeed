"""Acceptance suite.

Each test prints one ``ACn PASS|FAIL`` line and then asserts. All Monte
Carlo checks use seed 1, fixed before any run.
"""

import math
import time

import numpy as np
import pytest
from scipy.special import expit, logit

from twoarm.arms import BanditModel, bernoulli, bernoulli_d, gaussian
from twoarm.cli import main
from twoarm.complexity import brute_force_complexities, chernoff_info, complexities, g_alpha
from twoarm.rates import ExplorationRate, crossing_statistic, lil_bound
from twoarm.rng import derive
from twoarm.sim import SimulationConfig, log_error_slope, simulate, sweep
from twoarm.strategies import SPRT, AlphaElimination, FixedBudgetStatic, UniformElimination

SEED = 1
EASY = BanditModel(gaussian(0.5, 0.25), gaussian(0.0, 0.25))
DIFFICULT = BanditModel(gaussian(0.01, 0.25), gaussian(0.0, 0.25))

pytestmark = pytest.mark.acceptance


@pytest.fixture
def verdict(capsys):
    def report(name, ok, detail):
        with capsys.disabled():
            print(f"\n{name} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return report


def test_ac1_gaussian_closed_forms(verdict):
    e, d = complexities(EASY), complexities(DIFFICULT)
    values = (e.kappa_B, e.kappa_C_lower, d.kappa_B, d.kappa_C_lower)
    ok = all(abs(v - ref) <= 1e-12 for v, ref in zip(values, (8, 8, 20000, 20000)))
    verdict("AC1", ok, f"easy kappa_B={e.kappa_B!r} kappa_C={e.kappa_C_lower!r}; difficult kappa_B={d.kappa_B!r} kappa_C={d.kappa_C_lower!r}")


AC2_GAUSSIAN = [
    BanditModel(gaussian(m1, v1), gaussian(m2, v2))
    for m1, v1, m2, v2 in [
        (0.5, 0.25, 0.0, 0.25),
        (0.01, 0.25, 0.0, 0.25),
        (1.0, 1.0, 0.0, 9.0),
        (0.0, 4.0, 2.0, 1.0),
        (-1.0, 0.5, -1.5, 0.1),
        (3.0, 2.0, 2.9, 2.0),
        (10.0, 25.0, 0.0, 1.0),
        (0.2, 0.01, 0.25, 0.04),
        (-5.0, 3.0, 5.0, 7.0),
        (1.5, 0.3, 1.0, 1.2),
    ]
]
AC2_BERNOULLI = [
    BanditModel(bernoulli(p), bernoulli(q))
    for p, q in [
        (0.6, 0.4),
        (0.9, 0.5),
        (0.05, 0.3),
        (0.51, 0.49),
        (0.99, 0.9),
        (0.2, 0.1),
        (0.7, 0.95),
        (0.01, 0.02),
        (0.3, 0.8),
        (0.45, 0.6),
    ]
]


def test_ac2_oracle_equivalence(verdict):
    start = time.perf_counter()
    worst = 0.0
    for model in AC2_GAUSSIAN + AC2_BERNOULLI:
        a = complexities(model)
        b = brute_force_complexities(model, grid_resolution=2000)
        for key in ("c_star", "c_lower_star", "i_star", "i_lower_star"):
            ref = getattr(a, key)
            worst = max(worst, abs(getattr(b, key) - ref) / ref)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-3 and elapsed < 60
    verdict("AC2", ok, f"20 models, max relative deviation {worst:.3e} (limit 1e-3), {elapsed:.1f}s (limit 60s)")


AC3_GRID = [(p, q) for p in (0.15, 0.35, 0.55, 0.75, 0.95) for q in (0.05, 0.25, 0.45, 0.65)]


def _grid_max_g(mu1, mu2, n=4001, levels=4):
    # dense alpha grid with window refinement; no root finding
    th1, th2 = logit(mu1), logit(mu2)
    lo, hi = 1e-6, 1 - 1e-6
    best = -math.inf
    for _ in range(levels):
        a = np.linspace(lo, hi, n)
        p = expit(a * th1 + (1 - a) * th2)
        g = a * bernoulli_d(p, mu1) + (1 - a) * bernoulli_d(p, mu2)
        k = int(np.argmax(g))
        best = max(best, float(g[k]))
        h = (hi - lo) / (n - 1)
        lo, hi = max(1e-6, a[k] - 4 * h), min(1 - 1e-6, a[k] + 4 * h)
    return best


def test_ac3_chernoff_identities(verdict):
    balance = gap_g = 0.0
    ordering = True
    for p, q in AC3_GRID:
        model = BanditModel(bernoulli(p), bernoulli(q))
        th1, th2 = model.arm1.natural_param, model.arm2.natural_param
        K = model.arm1.family.divergence
        theta, k_star = chernoff_info(model)
        balance = max(balance, abs(K(theta, th1) - K(theta, th2)))
        r = complexities(model)
        gap_g = max(gap_g, abs(_grid_max_g(p, q) - k_star), abs(g_alpha(r.optimal_alpha, model) - k_star))
        ordering &= r.c_lower_star < r.c_star
    ok = balance <= 1e-10 and gap_g <= 1e-6 and ordering
    verdict("AC3", ok, f"max |K(th*,th1)-K(th*,th2)|={balance:.2e}, max |g_alpha* - K*|={gap_g:.2e}, K_* < K* on all 20: {ordering}")


def test_ac4_fixed_budget_exponents(verdict):
    budgets = [16, 24, 32, 40]
    cfg = SimulationConfig(EASY, FixedBudgetStatic(16), 100_000, SEED, sweep=budgets)
    errs = [pt.summary.error_prob for pt in sweep(cfg)]
    slope = log_error_slope(budgets, errs)
    slope_ok = abs(slope + 1 / 8) <= 0.15 / 8

    bern = BanditModel(bernoulli(0.6), bernoulli(0.4))
    k_star = complexities(bern).c_star
    details, bern_ok = [], True
    cfg = SimulationConfig(bern, FixedBudgetStatic(100, split="optimal"), 100_000, SEED, sweep=[100, 200, 300, 400])
    for pt in sweep(cfg):
        limit = math.exp(-k_star * pt.param) + 3 * pt.summary.error_prob_stderr
        bern_ok &= pt.summary.error_prob <= limit
        details.append(f"t={pt.param}: {pt.summary.error_prob:.4g}<={limit:.4g}")
    verdict(
        "AC4",
        slope_ok and bern_ok,
        f"gaussian slope={slope:.5f} (target -0.125 +/-15% = [-0.14375, -0.10625]), errors={['%.3g' % e for e in errs]}; "
        f"bernoulli {'; '.join(details)}",
    )


def test_ac5_delta_pac(verdict):
    delta = 0.1
    lines, ok = [], True
    for label, model in (("easy", EASY), ("difficult", DIFFICULT)):
        specs = {
            "robbins": UniformElimination(ExplorationRate("robbins", delta)),
            "improved_lil": UniformElimination(ExplorationRate("improved_lil", delta)),
            "alpha_elim": AlphaElimination(ExplorationRate("alpha_elim", delta)),
            "fixed_log": UniformElimination(ExplorationRate("fixed_log", delta)),
        }
        for name, spec in specs.items():
            s = simulate(SimulationConfig(model, spec, 10_000, SEED))
            required = name != "fixed_log"
            if required:
                ok &= s.error_prob <= delta and s.censored == 0
            tag = "" if required else " (no guarantee)"
            lines.append(f"{label}/{name} err={s.error_prob:.4f} tau={s.mean_tau:.1f}{tag}")
    verdict("AC5", ok, "; ".join(lines))


def test_ac6_sample_complexity_trend(verdict):
    deltas = [0.1, 0.01, 0.001]
    means = {}
    for kind in ("robbins", "improved_lil"):
        cfg = SimulationConfig(EASY, UniformElimination(ExplorationRate(kind, 0.1)), 10_000, SEED, sweep=deltas)
        means[kind] = [pt.summary.mean_tau for pt in sweep(cfg)]
    ratios = [m / math.log(1 / d) for m, d in zip(means["robbins"], deltas)]
    decreasing = all(a > b for a, b in zip(ratios, ratios[1:]))
    in_range = all(8 <= r <= 24 for r in ratios)
    improved = all(i < r for i, r in zip(means["improved_lil"], means["robbins"]))
    verdict(
        "AC6",
        decreasing and in_range and improved,
        f"robbins E[tau]/log(1/delta)={['%.3f' % r for r in ratios]}; improved_lil tau={['%.2f' % m for m in means['improved_lil']]} "
        f"< robbins tau={['%.2f' % m for m in means['robbins']]}",
    )


def test_ac7_sprt(verdict):
    delta = 1e-3
    s = simulate(SimulationConfig(EASY, SPRT(delta, (0.5, 0.0)), 10_000, SEED))
    target = 2 * 0.25 / 0.25 * math.log(1 / delta)
    rel = abs(s.mean_tau - target) / target
    ok = rel <= 0.2 and s.error_prob <= delta
    verdict("AC7", ok, f"mean tau={s.mean_tau:.3f} vs {target:.3f} (rel {rel:.3f} <= 0.2), error={s.error_prob:.5f} <= {delta}")


def test_ac8_lil_crossing(verdict):
    n_paths, length, chunk = 10_000, 10_000, 250
    stats = np.empty(n_paths)
    for c in range(n_paths // chunk):
        rng = derive(SEED, c)
        paths = np.cumsum(rng.standard_normal((chunk, length)), axis=1)
        stats[c * chunk : (c + 1) * chunk] = crossing_statistic(paths, 1.5)
    ok, parts = True, []
    for x in (3.0, 5.0, 8.0):
        freq = float(np.mean(stats > x))
        se = math.sqrt(freq * (1 - freq) / n_paths)
        bound = lil_bound(x, 1.5)
        ok &= freq <= bound + 3 * se
        parts.append(f"x={x:g}: freq={freq:.4f} <= bound {bound:.4f} + 3se")
    verdict("AC8", ok, "; ".join(parts))


def test_ac9_determinism(verdict, tmp_path, capsys):
    model = '{"family":"gaussian","mu":[0.5,0.0],"sigma2":[0.25,0.25]}'
    runs = {
        "sweep": ['{"kind":"uniform_elimination","rate":"improved_lil","delta":0.1}', "--sweep", "0.1,0.01,0.001"],
        "fixed": ['{"kind":"fixed_budget","t":24}'],
    }
    same = True
    for name, (strategy, *extra) in runs.items():
        texts = []
        for workers in (1, 8, 1):
            out = tmp_path / f"{name}_{workers}_{len(texts)}.csv"
            code = main(["simulate", "--model", model, "--strategy", strategy, "--reps", "3000",
                         "--seed", str(SEED), "--workers", str(workers), "--out", str(out), *extra])
            assert code == 0
            texts.append(out.read_bytes())
        same &= texts[0] == texts[1] == texts[2]
    capsys.readouterr()
    verdict("AC9", same, "CSV bytes identical across 1 and 8 workers and repeated runs")
