"""Throughput comparison of the numba and numpy kernel backends.

Runs each hot kernel on a representative workload with both builds and
prints per-call medians.  Usage:

    python benchmarks/bench_kernels.py [--repeats N]

The numba timings exclude compilation (one warmup call per kernel).
"""

import argparse
import math
import statistics
import time

import numpy as np

from bernamp import _kernels_numpy as np_impl
from bernamp import log_binomial_table
from bernamp.process import popcount_table

try:
    from bernamp import _kernels_numba as nb_impl
except ImportError:
    nb_impl = None


def timed(fn, args, repeats, inner):
    fn(*args)  # warmup; triggers jit compilation on the numba build
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        samples.append((time.perf_counter() - t0) / inner)
    return statistics.median(samples)


def workloads():
    rng = np.random.default_rng(0)
    lc, l1c = math.log(0.1), math.log(0.9)

    p, q = 0.27, 0.31
    yield ("hamming_renyi_logsum", 2000,
           (math.log(p), math.log1p(-p), math.log(q), math.log1p(-q),
            24, lc, l1c, 50.0, log_binomial_table(24)))

    grid = np.linspace(1e-4, 1.0 - 1e-4, 400)
    yield ("d1_grid_scan", 3,
           (np.log(grid), np.log1p(-grid), 2, lc, l1c, 50.0, 1.0,
            log_binomial_table(2)))

    lX = np.log(rng.dirichlet(np.ones(4096)))
    lY = np.log(rng.dirichlet(np.ones(4096)))
    yield ("full_renyi_logsum", 200, (lX, lY, 50.0))

    d, k = 3, 4
    lm = np.log(rng.dirichlet(np.ones(1 << d)))
    yield ("corner_pushforward_full", 100,
           (lm, popcount_table(d), d, k, lc, l1c))

    x = rng.uniform(0.05, 0.95, size=d)
    yield ("point_pushforward_full", 200,
           (np.log(x), np.log1p(-x), d, k))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=7,
                    help="timing samples per kernel (median is reported)")
    args = ap.parse_args()

    if nb_impl is None:
        print("numba backend unavailable; timing the numpy build only")

    header = f"{'kernel':<28} {'numpy':>12} {'numba':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, inner, call_args in workloads():
        t_np = timed(getattr(np_impl, name), call_args, args.repeats, inner)
        if nb_impl is not None:
            t_nb = timed(getattr(nb_impl, name), call_args, args.repeats, inner)
            ratio = t_np / t_nb if t_nb > 0 else float("inf")
            print(f"{name:<28} {t_np * 1e6:>10.1f}us {t_nb * 1e6:>10.1f}us "
                  f"{ratio:>8.1f}x")
        else:
            print(f"{name:<28} {t_np * 1e6:>10.1f}us {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
