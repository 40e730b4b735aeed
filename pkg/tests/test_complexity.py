import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoarm.arms import BERNOULLI, BanditModel, bernoulli, gaussian
from twoarm.complexity import (
    brute_force_complexities,
    chernoff_info,
    complexities,
    g_alpha,
    optimal_alpha,
    reverse_chernoff,
    uniform_complexities,
)

probs = st.floats(0.02, 0.98)


def pair(draw_p, draw_q):
    if abs(draw_p - draw_q) < 0.02:
        return None
    return BanditModel(bernoulli(draw_p), bernoulli(draw_q))


def test_gaussian_kappas(easy, difficult):
    r = complexities(easy)
    assert r.kappa_B == pytest.approx(8.0, abs=1e-12)
    assert r.kappa_C_lower == pytest.approx(8.0, abs=1e-12)
    assert complexities(difficult).kappa_B == pytest.approx(20000.0, rel=1e-12)


def test_gaussian_unequal_variance():
    m = BanditModel(gaussian(1.0, 1.0), gaussian(0.0, 9.0))
    r = complexities(m)
    assert r.c_star == pytest.approx(1 / 32)
    assert r.i_star == pytest.approx(1 / 40)
    assert r.optimal_alpha == pytest.approx(0.25)


def test_bernoulli_reference_values(bern64):
    r = complexities(bern64)
    assert r.c_star == pytest.approx(0.0204109973, rel=1e-8)
    assert r.c_lower_star == pytest.approx(0.0201355136, rel=1e-8)
    assert r.optimal_alpha == pytest.approx(0.5, abs=1e-12)
    # symmetric model: both infima sit at the midpoint
    assert r.i_lower_star == pytest.approx(r.c_lower_star, rel=1e-10)


@settings(max_examples=40)
@given(probs, probs)
def test_chernoff_balance(p, q):
    model = pair(p, q)
    if model is None:
        return
    th1, th2 = model.arm1.natural_param, model.arm2.natural_param
    K = BERNOULLI.divergence
    theta, value = chernoff_info(model)
    assert abs(K(theta, th1) - K(theta, th2)) <= 1e-10
    assert value == pytest.approx(K(theta, th1))
    theta_l, value_l = reverse_chernoff(model)
    assert abs(K(th1, theta_l) - K(th2, theta_l)) <= 1e-10


@settings(max_examples=40)
@given(probs, probs)
def test_bernoulli_orderings(p, q):
    model = pair(p, q)
    if model is None:
        return
    r = complexities(model)
    assert r.c_lower_star <= r.c_star
    assert r.i_star <= r.c_star * (1 + 1e-12)
    assert r.i_lower_star <= r.c_lower_star * (1 + 1e-12)
    assert 0 < r.optimal_alpha < 1


@settings(max_examples=25)
@given(probs, probs)
def test_swap_symmetry(p, q):
    model = pair(p, q)
    if model is None:
        return
    a, b = complexities(model), complexities(model.swapped())
    assert b.c_star == pytest.approx(a.c_star, rel=1e-9)
    assert b.c_lower_star == pytest.approx(a.c_lower_star, rel=1e-9)
    assert b.optimal_alpha == pytest.approx(1 - a.optimal_alpha, abs=1e-9)


def test_g_alpha_peaks_at_optimum():
    model = BanditModel(bernoulli(0.9), bernoulli(0.5))
    r = complexities(model)
    best = g_alpha(r.optimal_alpha, model)
    assert best == pytest.approx(r.c_star, rel=1e-9)
    for a in (0.1, 0.3, 0.45, 0.47, 0.6, 0.9):
        assert g_alpha(a, model) <= best
    assert g_alpha(0.5, model) == pytest.approx(uniform_complexities(model)[0], rel=1e-12)
    with pytest.raises(ValueError):
        g_alpha(1.0, model)


def test_optimal_alpha_gaussian():
    assert optimal_alpha(BanditModel(gaussian(0, 1), gaussian(1, 9))) == pytest.approx(0.25)


@pytest.mark.parametrize(
    "model",
    [
        BanditModel(bernoulli(0.9), bernoulli(0.5)),
        BanditModel(bernoulli(0.05), bernoulli(0.3)),
        BanditModel(gaussian(2.0, 1.0), gaussian(0.0, 4.0)),
    ],
)
def test_oracle_agreement(model):
    a = complexities(model)
    b = brute_force_complexities(model, grid_resolution=1000)
    for key in ("c_star", "c_lower_star", "i_star", "i_lower_star"):
        assert getattr(b, key) == pytest.approx(getattr(a, key), rel=1e-4)
    assert b.optimal_alpha == pytest.approx(a.optimal_alpha, abs=1e-3)


def test_oracle_resolution_check(easy):
    with pytest.raises(ValueError):
        brute_force_complexities(easy, grid_resolution=10)


def test_report_dict(bern64):
    d = complexities(bern64).as_dict()
    assert d["kappa_B"] == pytest.approx(1 / d["c_star"])
    assert math.isfinite(d["theta_star"])
