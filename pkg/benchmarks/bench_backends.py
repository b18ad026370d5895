"""Compare the numba and pure-numpy Gram-sum backends.

    python3 benchmarks/bench_backends.py [--sizes 200 1000 4000] [--repeat 5]

Both backends are called directly, so the COPMMD_BACKEND flag does not
matter here. The first numba call per signature compiles (or loads from the
on-disk cache) and is reported separately.
"""
import argparse
import time

import numpy as np

from copmmd import _kernels


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        val = fn()
        best = min(best, time.perf_counter() - t0)
    return best, val


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 1000, 4000])
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    g = np.random.default_rng(0)
    gamma = 6.0  # sigma^2 = 1/12
    warm = g.random((8, args.d))
    t0 = time.perf_counter()
    _kernels.gauss_cross_sum(warm, warm, gamma, _kernels.NUMBA_IMPL)
    _kernels.gauss_offdiag_sum(warm, gamma, _kernels.NUMBA_IMPL)
    print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.3f}s")

    print(f"{'op':<8} {'m':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8} {'rel diff':>9}")
    for m in args.sizes:
        a, b = g.random((m, args.d)), g.random((m, args.d))
        ops = {
            "cross": lambda impl: _kernels.gauss_cross_sum(a, b, gamma, impl),
            "offdiag": lambda impl: _kernels.gauss_offdiag_sum(a, gamma, impl),
        }
        for name, op in ops.items():
            tn, vn = timed(lambda: op(_kernels.NUMBA_IMPL), args.repeat)
            tp, vp = timed(lambda: op(_kernels.NUMPY_IMPL), args.repeat)
            print(f"{name:<8} {m:>6} {tn:>10.4f} {tp:>10.4f} {tp / tn:>7.1f}x {abs(vn - vp) / abs(vp):>9.1e}")


if __name__ == "__main__":
    main()
