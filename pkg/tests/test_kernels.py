import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoarm import kernels
from twoarm.kernels import _pykernels
from twoarm.rng import derive

BACKENDS = kernels.available_backends()
needs_cython = pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")


def boundary(n, scale, power=0.5):
    thr = scale * np.arange(n, dtype=float) ** power
    thr[0] = np.inf
    return thr


@needs_cython
@settings(max_examples=30)
@given(st.integers(0, 2**32), st.floats(0.01, 1.0), st.floats(0.5, 4.0), st.integers(1, 4000))
def test_pair_gaussian_backends_agree(seed, gap, scale, kmax):
    cap = 2 * kmax
    thr = boundary(kmax + 1, scale)
    out = [mod.pair_gaussian(derive(seed, 0), gap, 0.5, 0.0, 0.7, thr, cap) for mod in BACKENDS.values()]
    assert out[0] == out[1]


@needs_cython
@settings(max_examples=30)
@given(st.integers(0, 2**32), st.floats(0.05, 0.95), st.floats(0.5, 4.0), st.integers(2, 5000))
def test_alpha_gaussian_backends_agree(seed, alpha, scale, cap):
    t = np.arange(cap + 1, dtype=float)
    thr = scale / np.sqrt(np.maximum(t, 1.0))
    thr[:2] = np.inf
    out = [mod.alpha_gaussian(derive(seed, 3), 0.4, 1.0, 0.0, 2.0, alpha, thr, cap) for mod in BACKENDS.values()]
    assert out[0] == out[1]


@needs_cython
@settings(max_examples=30)
@given(st.integers(0, 2**32), st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.integers(1, 4000))
def test_bernoulli_kl_backends_agree(seed, p1, p2, kmax):
    k = np.arange(kmax + 1, dtype=float)
    thr = np.log((np.log(2 * np.maximum(k, 1)) + 1) / 0.1)
    thr[0] = np.inf
    out = [mod.pair_bernoulli_kl(derive(seed, 1), p1, p2, thr, 2 * kmax) for mod in BACKENDS.values()]
    assert out[0] == out[1]


@needs_cython
@given(st.integers(0, 2**32), st.booleans(), st.integers(0, 3000), st.integers(0, 3000))
def test_static_sums_backends_agree(seed, bern, n1, n2):
    a1, a2 = (0.6, 0.4) if bern else (1.0, -1.0)
    out = [mod.static_sums(derive(seed, 2), int(bern), a1, 2.0, a2, 0.5, n1, n2) for mod in BACKENDS.values()]
    assert out[0] == out[1]


@pytest.mark.parametrize("mod", list(BACKENDS.values()), ids=list(BACKENDS))
def test_stream_consumption_matches_scalar_draws(mod):
    # three pairs with an unreachable boundary: the sum equals hand-drawn pairs
    thr = np.full(4, np.inf)
    tau, d, stopped = mod.pair_gaussian(derive(5, 0), 1.0, 2.0, -1.0, 3.0, thr, 6)
    rng = derive(5, 0)
    ref = 0.0
    for _ in range(3):
        x = 1.0 + 2.0 * rng.standard_normal()
        y = -1.0 + 3.0 * rng.standard_normal()
        ref += x - y
    assert (tau, stopped) == (6, False)
    assert d == ref

    s1, s2 = mod.static_sums(derive(5, 1), 1, 0.3, 0.0, 0.8, 0.0, 10, 7)
    rng = derive(5, 1)
    assert s1 == sum(rng.random() < 0.3 for _ in range(10))
    assert s2 == sum(rng.random() < 0.8 for _ in range(7))


@pytest.mark.parametrize("mod", list(BACKENDS.values()), ids=list(BACKENDS))
def test_short_tables_rejected(mod):
    with pytest.raises(ValueError):
        mod.pair_gaussian(derive(0, 0), 0.0, 1.0, 0.0, 1.0, np.zeros(3), 10)
    with pytest.raises(ValueError):
        mod.alpha_gaussian(derive(0, 0), 0.0, 1.0, 0.0, 1.0, 0.5, np.zeros(5), 10)
    with pytest.raises(ValueError):
        mod.pair_bernoulli_kl(derive(0, 0), 0.5, 0.4, np.zeros(2), 10)


def test_alpha_schedule_counts():
    thr = np.full(101, np.inf)
    tau, n1, _, _, stopped = _pykernels.alpha_gaussian(derive(0, 0), 0, 1, 0, 1, 0.3, thr, 100)
    assert (tau, n1, stopped) == (100, 30, False)


def test_pure_python_switch():
    env = dict(os.environ, TWOARM_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from twoarm import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_rng_streams():
    a = derive(7, 3).standard_normal(4)
    assert np.array_equal(a, derive(7, 3).standard_normal(4))
    assert not np.array_equal(a, derive(7, 4).standard_normal(4))
    assert not np.array_equal(a, derive(8, 3).standard_normal(4))
    with pytest.raises(ValueError):
        derive(-1, 0)
