"""Pure numpy implementation of the strategy kernels.

Draws are taken in blocks that grow geometrically; a block consumes the
stream exactly like the same number of single draws, so the outcome matches the
compiled kernels (the tail of the last block is simply discarded). Running sums
are seeded with the carried total before ``cumsum`` so accumulation order is
identical to a scalar loop.
"""

from __future__ import annotations

import numpy as np

_FIRST_BLOCK = 64
_MAX_BLOCK = 1 << 16


def _blocks(total: int):
    start, size = 0, _FIRST_BLOCK
    while start < total:
        stop = min(total, start + size)
        yield start, stop
        start = stop
        size = min(2 * size, _MAX_BLOCK)


def _running(values: np.ndarray, carry: float) -> np.ndarray:
    values[0] += carry
    return np.cumsum(values, out=values)


def pair_gaussian(gen, mu1, sd1, mu2, sd2, thr, cap):
    kmax = cap // 2
    if len(thr) <= kmax:
        raise ValueError("threshold table shorter than cap/2 + 1")
    d = 0.0
    for start, stop in _blocks(kmax):
        z = gen.standard_normal(2 * (stop - start))
        x = mu1 + sd1 * z[0::2]
        y = mu2 + sd2 * z[1::2]
        run = _running(x - y, d)
        hit = np.flatnonzero(np.abs(run) > thr[start + 1 : stop + 1])
        if hit.size:
            i = int(hit[0])
            return 2 * (start + i + 1), float(run[i]), True
        d = float(run[-1])
    return 2 * kmax, d, False


def alpha_gaussian(gen, mu1, sd1, mu2, sd2, alpha, thr, cap):
    if len(thr) <= cap:
        raise ValueError("threshold table shorter than cap + 1")
    s1 = s2 = 0.0
    n1 = n2 = 0
    for start, stop in _blocks(cap):
        t = np.arange(start + 1, stop + 1, dtype=float)
        to_arm1 = np.ceil(alpha * t) != np.ceil(alpha * (t - 1))
        z = gen.standard_normal(stop - start)
        x = np.where(to_arm1, mu1 + sd1 * z, mu2 + sd2 * z)
        run1 = _running(np.where(to_arm1, x, 0.0), s1)
        run2 = _running(np.where(to_arm1, 0.0, x), s2)
        cnt1 = np.cumsum(to_arm1) + n1
        cnt2 = np.cumsum(~to_arm1) + n2
        both = (cnt1 > 0) & (cnt2 > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            gapstat = np.abs(run1 / cnt1 - run2 / cnt2)
        hit = np.flatnonzero(both & (gapstat > thr[start + 1 : stop + 1]))
        if hit.size:
            i = int(hit[0])
            return start + i + 1, int(cnt1[i]), float(run1[i]), float(run2[i]), True
        s1, s2 = float(run1[-1]), float(run2[-1])
        n1, n2 = int(cnt1[-1]), int(cnt2[-1])
    return cap, n1, s1, s2, False


def _bern_div(x: np.ndarray, m: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        left = np.where(x > 0.0, x * np.log(x / m), 0.0)
        right = np.where(x < 1.0, (1.0 - x) * np.log((1.0 - x) / (1.0 - m)), 0.0)
    return left + right


def pair_bernoulli_kl(gen, p1, p2, thr, cap):
    kmax = cap // 2
    if len(thr) <= kmax:
        raise ValueError("threshold table shorter than cap/2 + 1")
    c1 = c2 = 0
    for start, stop in _blocks(kmax):
        u = gen.random(2 * (stop - start))
        run1 = np.cumsum(u[0::2] < p1) + c1
        run2 = np.cumsum(u[1::2] < p2) + c2
        k = np.arange(start + 1, stop + 1, dtype=float)
        x = run1 / k
        y = run2 / k
        m = 0.5 * (x + y)
        stat = k * (_bern_div(x, m) + _bern_div(y, m))
        hit = np.flatnonzero((run1 != run2) & (stat > thr[start + 1 : stop + 1]))
        if hit.size:
            i = int(hit[0])
            return 2 * (start + i + 1), int(run1[i]), int(run2[i]), True
        c1, c2 = int(run1[-1]), int(run2[-1])
    return 2 * kmax, c1, c2, False


def static_sums(gen, bernoulli, a1, b1, a2, b2, n1, n2):
    if bernoulli:
        s1 = float(np.count_nonzero(gen.random(n1) < a1))
        s2 = float(np.count_nonzero(gen.random(n2) < a2))
        return s1, s2
    x = a1 + b1 * gen.standard_normal(n1)
    y = a2 + b2 * gen.standard_normal(n2)
    s1 = float(np.cumsum(x)[-1]) if n1 else 0.0
    s2 = float(np.cumsum(y)[-1]) if n2 else 0.0
    return s1, s2
