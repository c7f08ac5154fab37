"""Time the compiled kernels against their numpy twins and check they agree.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]
"""
import argparse
import time

import numpy as np

from cotsum import _fallback

try:
    from cotsum import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _first(v):
    return v[0] if isinstance(v, tuple) else v


def cases(scale):
    X = int(10**6 * scale)
    q = int(10007 * scale) | 1
    w = _fallback.divisor_sieve(X) / np.maximum(np.arange(X + 1), 1)
    w[0] = 0.0
    w_small = np.ascontiguousarray(w[: int(10**5 * scale) + 1])
    xs = np.random.Generator(np.random.Philox(1)).random(int(200 * scale))
    return [
        ("divisor_sieve", (X,)),
        ("c0_sum", (3, q)),
        ("c0_sweep", (int(2003 * scale), 1)),
        ("d1_rational", (2, 47, w)),
        ("d1_real", (0.6180339887498949, w)),
        ("d1_many", (xs, w_small, 1)),
        ("frac_series", (0.6180339887498949, X)),
    ]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--scale", type=float, default=1.0)
    args = p.parse_args()
    if _kernels is None:
        raise SystemExit("compiled kernels not importable; build with pip install -e .")
    print(f"{'kernel':14s} {'cython s':>10s} {'numpy s':>10s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, argv in cases(args.scale):
        tc, vc = best_of(lambda: getattr(_kernels, name)(*argv), args.repeat)
        tp, vp = best_of(lambda: getattr(_fallback, name)(*argv), args.repeat)
        a, b = np.asarray(_first(vc), dtype=float), np.asarray(_first(vp), dtype=float)
        ok = ~(np.isnan(a) | np.isnan(b))
        diff = float(np.max(np.abs(a[ok] - b[ok]))) if ok.any() else 0.0
        print(f"{name:14s} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
