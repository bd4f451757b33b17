#!/usr/bin/env python3
"""Benchmark the numba lane against the pure-numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--repeats N]

Representative workloads: the bucket census at the paper-scale agent budget
and the triple census at the alternative-outlier scenario's shape. The numba
lane is exercised only when importable (run with PREFTEST_NO_NUMBA=1 to
confirm the fallback alone).
"""

import argparse
import math
import time

import numpy as np

import preftest as pt
from preftest import kernels
from preftest.mc import merge_plan_array, perm_code_lut, restriction_bucket_ids, sort_cost_table


def timeit(fn, repeats):
    fn()  # warm-up (jit compile)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_bucket(repeats):
    rng = np.random.default_rng(0)
    prof, _ = pt.gen_uniform_profile(3, 10_000, rng)
    bucket_of = restriction_bucket_ids(prof, range(3))
    draws = rng.integers(0, 10_000, size=(900, 2506)).astype(np.int64)
    cost = sort_cost_table(3)
    rows = []
    rows.append(("bucket/numpy", timeit(
        lambda: kernels._bucket_counts_np(bucket_of, draws, 6, cost), repeats)))
    if kernels.HAVE_NUMBA:
        rows.append(("bucket/numba", timeit(
            lambda: kernels._bucket_counts_nb(bucket_of, draws, np.int64(6), cost), repeats)))
    return rows


def bench_triples(repeats):
    rng = np.random.default_rng(1)
    prof, _ = pt.gen_uniform_profile(9, 10_000, rng)
    pos = np.ascontiguousarray(prof.positions())
    trials, samples, ell = 900, 157, 6
    alts = np.stack(
        [np.sort(rng.choice(9, size=ell, replace=False)) for _ in range(trials)]
    ).astype(np.int64)
    draws = rng.integers(0, 10_000, size=(trials, samples)).astype(np.int64)
    merges = merge_plan_array(ell)
    lut = perm_code_lut()
    rows = []
    rows.append(("triple/numpy", timeit(
        lambda: kernels._triple_counts_np(pos, draws, alts, merges, lut), repeats)))
    if kernels.HAVE_NUMBA:
        rows.append(("triple/numba", timeit(
            lambda: kernels._triple_counts_nb(pos, draws, alts, merges, lut), repeats)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"active backend: {kernels.backend()}")
    results = bench_bucket(args.repeats) + bench_triples(args.repeats)
    base = {}
    for name, seconds in results:
        kind = name.split("/")[0]
        base.setdefault(kind, seconds)
        speedup = base[kind] / seconds
        print(f"{name:>14}: {seconds * 1e3:8.2f} ms/batch   x{speedup:5.1f} vs numpy")


if __name__ == "__main__":
    main()
