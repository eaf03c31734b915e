#!/usr/bin/env python3
"""Benchmark the hot kernels on both backends (numba jit vs pure numpy).

Usage:
    python benchmarks/bench_kernels.py [--repeat N] [--sizes small|large]

The same kernels back the group-ring products, the reachability DP, and the
arithmetic-set searches; FPVANISH_BACKEND selects the backend at import time
for library users, while this script switches explicitly to compare.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fpvanish import _kernels as K

CASES_SMALL = {"fp": (5, 4, 2), "cyc": (5, 3, 1), "reach": (7, 3, 2), "arith": (31, 1, 2048)}
CASES_LARGE = {"fp": (7, 6, 2), "cyc": (7, 4, 1), "reach": (11, 4, 3), "arith": (31, 1, 16384)}


def timed(fn, repeat):
    fn()  # warm-up (jit compilation for the numba path)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_fp(p, n, r, rng):
    table = rng.integers(0, p, size=p**n).astype(np.int64)
    v = tuple(int(c) for c in rng.integers(0, p, size=n))

    def run():
        K.fp_binomial_power(table, (p,) * n, v, r, p)

    return run


def bench_cyc(p, n, r, rng):
    table = rng.integers(-3, 4, size=(p**n, p - 1)).astype(np.int64)
    v = tuple(int(c) for c in rng.integers(0, p, size=n))

    def run():
        K.cyc_binomial_power(table, (p,) * n, v, 2, r, p)

    return run


def bench_reach(p, n, r, rng):
    reach = (rng.random(p**n) < 0.2).astype(np.uint8)
    reach[0] = 1
    step = tuple(int(c) for c in rng.integers(0, p, size=n))

    def run():
        K.reach_expand(reach, (p,) * n, step, r, p)

    return run


def bench_arith(p, r, batch, rng):
    masks = (rng.random((batch, p)) < 0.4).astype(np.uint8)

    def run():
        K.masks_arithmetic_ok(masks, r, p)

    return run


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--sizes", choices=("small", "large"), default="small")
    args = parser.parse_args()
    cases = CASES_SMALL if args.sizes == "small" else CASES_LARGE
    rng = np.random.default_rng(0)

    builders = {
        "fp_binomial_power": bench_fp(*cases["fp"], rng),
        "cyc_binomial_power": bench_cyc(*cases["cyc"], rng),
        "reach_expand": bench_reach(*cases["reach"], rng),
        "masks_arithmetic_ok": bench_arith(*cases["arith"], rng),
    }

    print(f"{'kernel':24s} {'numpy':>12s} {'numba':>12s} {'speedup':>9s}")
    for name, fn in builders.items():
        K.set_backend("numpy")
        t_np = timed(fn, args.repeat)
        if K._NUMBA_OK:
            K.set_backend("numba")
            t_nb = timed(fn, args.repeat)
            ratio = t_np / t_nb if t_nb > 0 else float("inf")
            print(f"{name:24s} {t_np * 1e6:10.1f}us {t_nb * 1e6:10.1f}us {ratio:8.2f}x")
        else:
            print(f"{name:24s} {t_np * 1e6:10.1f}us {'n/a':>12s} {'':>9s}")
    K.set_backend("auto")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
