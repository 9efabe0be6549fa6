#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Run after building the extension:

    python benchmarks/bench_kernels.py [--n 1000000]

Prints one row per kernel with both timings and the speedup.  The two
implementations are imported directly (not through wdiv.backend), so the
comparison works regardless of which one the package selected.
"""

import argparse
import math
import time

import numpy as np

from wdiv import _kernels_py

try:
    from wdiv import _kernels
except ImportError:
    _kernels = None


def _time(fn, *args, repeat=3):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1_000_000, help="sieve length")
    ap.add_argument("--nx", type=int, default=20_000, help="evaluation points")
    ap.add_argument("--terms", type=int, default=4_000, help="series terms")
    args = ap.parse_args()

    ct = np.cos(2 * np.pi * np.arange(2) / 2)
    st = np.sin(2 * np.pi * np.arange(3) / 3)
    xs = np.linspace(2.0, 10_000.0, args.nx)
    freqs = 4 * np.pi * np.sqrt(np.arange(1, args.terms + 1, dtype=float))
    weights = 1.0 / np.arange(1, args.terms + 1, dtype=float) ** 0.75
    cuts = np.array([args.terms // 10, args.terms], dtype=np.int64)

    cases = [
        ("divisor_convolution", (args.n, ct, st)),
        ("psi_pair_sums", (xs, 2, 1, 3, 1)),
        ("sqrt_cos_series", (xs, freqs, weights, -0.75 * math.pi, cuts)),
    ]

    print(f"{'kernel':<22} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, call_args in cases:
        t_py, out_py = _time(getattr(_kernels_py, name), *call_args)
        if _kernels is None:
            print(f"{name:<22} {t_py:>9.3f}s {'n/a':>10} {'':>8}")
            continue
        t_c, out_c = _time(getattr(_kernels, name), *call_args)
        worst = float(np.max(np.abs(np.asarray(out_py) - np.asarray(out_c))))
        print(
            f"{name:<22} {t_py:>9.3f}s {t_c:>9.3f}s {t_py / t_c:>7.1f}x"
            f"   (max |diff| = {worst:.2e})"
        )


if __name__ == "__main__":
    main()
