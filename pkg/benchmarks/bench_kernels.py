"""Compiled vs numpy kernels on the two hot loops.

    python3 benchmarks/bench_kernels.py [--subsets N] [--restarts N]
"""
import argparse
import itertools
import time

import numpy as np

from upbw import kernels
from upbw.linalg import haar_states
from upbw.upb import build_pyramid, tensor_upb


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--subsets", type=int, default=100_000)
    ap.add_argument("--restarts", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    p = build_pyramid()
    t = tensor_upb(p, p, validate_now=False)
    subs = np.array(list(itertools.islice(itertools.combinations(range(25), 9), args.subsets)), dtype=np.intp)
    H = t.projector()
    rng = np.random.default_rng(0)
    cases = [("3x3", p.projector(), 3), ("9x9", H, 9)]

    print(f"backends: {sorted(kernels.BACKENDS)}  default: {kernels.BACKEND}")
    print(f"{'kernel':<34}{'backend':<10}{'seconds':>10}")
    for name in sorted(kernels.BACKENDS):
        sec = best_of(lambda: kernels.min_singular_values(t.alphas, subs, backend=name, threads=1), args.repeat)
        print(f"{'min-SV, %d 9x9 subsets' % len(subs):<34}{name:<10}{sec:>10.3f}")
    for label, op, d in cases:
        starts = list(zip(haar_states(args.restarts, d, rng), haar_states(args.restarts, d, rng)))
        for name in sorted(kernels.BACKENDS):
            sec = best_of(lambda: [kernels.seesaw(op, d, d, a, b, 500, 1e-13, backend=name) for a, b in starts],
                          args.repeat)
            print(f"{'seesaw, %d restarts, %s' % (len(starts), label):<34}{name:<10}{sec:>10.3f}")


if __name__ == "__main__":
    main()
