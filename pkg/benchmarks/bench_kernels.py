"""Compare the compiled and numpy kernel backends on representative workloads.

Usage: python3 benchmarks/bench_kernels.py [--reps N] [--seed S]
"""

from __future__ import annotations

import argparse
import time

from twoarm.arms import BanditModel, bernoulli, gaussian
from twoarm.rates import ExplorationRate
from twoarm.rng import derive
from twoarm.strategies import (
    _alpha_boundary,
    _bernoulli_threshold,
    _pair_boundary,
    default_cap,
)
from twoarm.kernels import available_backends

EASY = BanditModel(gaussian(0.5, 0.25), gaussian(0.0, 0.25))
HARD = BanditModel(gaussian(0.01, 0.25), gaussian(0.0, 0.25))
BERN = BanditModel(bernoulli(0.6), bernoulli(0.4))


def workloads():
    rate = ExplorationRate("improved_lil", 0.1)
    out = []
    for label, model, reps_scale in (("easy", EASY, 1.0), ("difficult", HARD, 0.01)):
        cap = default_cap(model, 0.1)
        thr = _pair_boundary(rate, 0.25, cap)
        out.append((f"pair_gaussian/{label}", "pair_gaussian", (0.5 if label == "easy" else 0.01, 0.5, 0.0, 0.5, thr, cap), reps_scale))
    cap = default_cap(EASY, 0.1)
    thr = _alpha_boundary(ExplorationRate("alpha_elim", 0.1), 0.5, 0.25, 0.25, cap)
    out.append(("alpha_gaussian/easy", "alpha_gaussian", (0.5, 0.5, 0.0, 0.5, 0.5, thr, cap), 1.0))
    cap = default_cap(BERN, 0.1)
    out.append(("pair_bernoulli_kl/0.6-0.4", "pair_bernoulli_kl", (0.6, 0.4, _bernoulli_threshold(0.1, cap), cap), 0.2))
    out.append(("static_sums/gaussian t=40", "static_sums", (0, 0.5, 0.5, 0.0, 0.5, 20, 20), 1.0))
    return out


def samples_of(name, result, args):
    if name == "static_sums":
        return args[-2] + args[-1]
    return result[0]


def bench(mod, name, args, reps, seed):
    fn = getattr(mod, name)
    gens = [derive(seed, r) for r in range(reps)]
    total = 0
    start = time.perf_counter()
    for gen in gens:
        total += samples_of(name, fn(gen, *args), args)
    elapsed = time.perf_counter() - start
    return elapsed, total


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'workload':32s} {'backend':8s} {'reps':>6s} {'seconds':>9s} {'ns/sample':>10s} {'speedup':>8s}")
    for label, name, kargs, scale in workloads():
        reps = max(1, int(args.reps * scale))
        base = None
        for bname in ("python", "cython"):
            if bname not in backends:
                continue
            secs, samples = bench(backends[bname], name, kargs, reps, args.seed)
            base = base or secs
            print(f"{label:32s} {bname:8s} {reps:6d} {secs:9.3f} {1e9 * secs / samples:10.1f} {base / secs:7.2f}x")


if __name__ == "__main__":
    main()
