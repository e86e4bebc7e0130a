#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Synthetic workloads mirror the real call sites: candidate scoring over a
hub node's successor arrays, LCS for rouge-l, and Jaccard argmax over a
whole graph's node token index.
"""

import argparse
import random
import time

import numpy as np

from storyplan._kernels import _pykernels

try:
    from storyplan._kernels import _ckernels
except ImportError:
    _ckernels = None


def time_call(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - started)
    return best


def bench_score(rng, n=200_000):
    degree_values = np.array([rng.uniform(0.5, 9.0) for _ in range(n)])
    in_degrees = np.array([float(rng.randint(1, 50)) for _ in range(n)])
    counts = np.array([rng.randint(0, 4) for _ in range(n)], dtype=np.int64)
    out = np.empty(n)
    return f"score_candidates ({n:,} candidates)", (degree_values, in_degrees, counts, 2, 1.0, out)


def bench_lcs(rng, n=1500):
    a = np.array([rng.randint(0, 30) for _ in range(n)], dtype=np.int64)
    b = np.array([rng.randint(0, 30) for _ in range(n)], dtype=np.int64)
    return f"lcs_length ({n} x {n} tokens)", (a, b)


def bench_jaccard(rng, n_nodes=100_000, vocab=5000):
    token_ids, offsets = [], [0]
    for _ in range(n_nodes):
        toks = sorted(rng.sample(range(vocab), rng.randint(1, 4)))
        token_ids.extend(toks)
        offsets.append(len(token_ids))
    degrees = np.array([rng.randint(0, 100) for _ in range(n_nodes)], dtype=np.int64)
    query = np.array(sorted(rng.sample(range(vocab), 4)), dtype=np.int64)
    return (
        f"jaccard_best ({n_nodes:,} nodes)",
        (query, 1, np.array(token_ids, dtype=np.int64), np.array(offsets, dtype=np.int64), degrees),
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(0)
    cases = [bench_score(rng), bench_lcs(rng), bench_jaccard(rng)]

    print(f"{'kernel':<40} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>9}")
    for name, call_args in cases:
        fn_name = name.split(" ")[0]
        pure = time_call(getattr(_pykernels, fn_name), call_args, args.repeats)
        if _ckernels is None:
            print(f"{name:<40} {pure:>10.4f} {'n/a':>13} {'n/a':>9}")
            continue
        compiled = time_call(getattr(_ckernels, fn_name), call_args, args.repeats)
        print(f"{name:<40} {pure:>10.4f} {compiled:>13.4f} {pure / compiled:>8.1f}x")
    if _ckernels is None:
        print("\ncompiled kernels unavailable; rebuild with `pip install -e . --no-build-isolation`")


if __name__ == "__main__":
    main()
