#!/usr/bin/env python3
"""Benchmark the compiled summation kernels against the pure-Python
fallback, and one end-to-end quantity on top of each.

Usage:  python benchmarks/bench_kernels.py [--repeat 5]

The two backends execute the identical arithmetic (same chunking, same
compensation), so the value columns must agree bit for bit; only the
timings differ.
"""

import argparse
import time

import numpy as np

from singtrace import _kernels_py

try:
    from singtrace import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def best_of(fn, repeat):
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def run_kernel_benchmarks(repeat):
    rng = np.random.default_rng(42)
    buf = rng.normal(size=2_000_000)
    xs = rng.normal(size=500_000)
    ys = rng.normal(size=500_000)
    cases = [
        ("pow_sum(1.001, 1..1e6)",
         lambda k: k.pow_sum(1.001, 1, 1_000_000)),
        ("pow_sum(2.5, 1..1e6)",
         lambda k: k.pow_sum(2.5, 1, 1_000_000)),
        ("exp_pow_sum(1e-9, 2, 1..1e6)",
         lambda k: k.exp_pow_sum(1e-9, 2.0, 1, 1_000_000)[0]),
        ("sum_comp(2e6 doubles)",
         lambda k: k.sum_comp(buf)),
        ("exp_lincomb_sum(5e5 terms)",
         lambda k: k.exp_lincomb_sum(0.31, xs, 1.7, ys)),
    ]
    rows = []
    for name, call in cases:
        t_py, v_py = best_of(lambda: call(_kernels_py), repeat)
        if _kernels_c is not None:
            t_c, v_c = best_of(lambda: call(_kernels_c), repeat)
            assert v_c == v_py, f"{name}: backends disagree ({v_c} vs {v_py})"
            rows.append((name, t_py, t_c, t_py / t_c))
        else:
            rows.append((name, t_py, None, None))
    return rows


def run_end_to_end(repeat):
    from singtrace import _backend, corpus
    from singtrace.spaces import residue_seminorm

    x = corpus.gen_spectrum("harmonic")

    def z1():
        return residue_seminorm(x).value

    t, v = best_of(z1, repeat)
    return [(f"residue_seminorm(harmonic) [{_backend.BACKEND} backend]",
             t, v)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _kernels_c is None:
        print("compiled extension not available; timing the fallback only\n")

    print(f"{'kernel':<38} {'pure s':>10} {'compiled s':>12} {'speedup':>9}")
    print("-" * 72)
    for name, t_py, t_c, speed in run_kernel_benchmarks(args.repeat):
        if t_c is None:
            print(f"{name:<38} {t_py:>10.4f} {'-':>12} {'-':>9}")
        else:
            print(f"{name:<38} {t_py:>10.4f} {t_c:>12.4f} {speed:>8.1f}x")
    print()
    for name, t, v in run_end_to_end(args.repeat):
        print(f"{name:<58} {t:>8.4f}s  -> {v:.12f}")
    if _kernels_c is not None:
        print("\nvalue columns agreed bit-for-bit across backends")


if __name__ == "__main__":
    main()
