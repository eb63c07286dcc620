"""Compare the compiled and pure kernel backends.

Times Lobachevsky evaluation and the volume sum over a range of array sizes
and reports the speedup of the compiled extension, confirming both backends
agree on the same inputs.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import timeit

import numpy as np

from cuspforge import _kernels
from cuspforge._kernels import _pure

try:
    from cuspforge._kernels import _speedups
except ImportError:
    _speedups = None


def bench(fn, arg, repeats):
    timer = timeit.Timer(lambda: fn(arg))
    number, _ = timer.autorange()
    return min(timer.repeat(repeats, number)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print("selected backend: %s" % _kernels.BACKEND)
    if _speedups is None:
        print("compiled extension unavailable; timing pure backend only")

    rng = np.random.default_rng(0)
    print("%-18s %10s %12s %12s %9s" % ("kernel", "size", "pure (us)",
                                        "compiled (us)", "speedup"))
    for name, pure_fn, fast_fn in (
            ("lobachevsky", _pure.lobachevsky,
             _speedups.lobachevsky if _speedups else None),
            ("neg_log_2sin", _pure.neg_log_2sin,
             _speedups.neg_log_2sin if _speedups else None),
            ("volume_half_sum", _pure.volume_half_sum,
             _speedups.volume_half_sum if _speedups else None)):
        for size in (12, 120, 1200, 12000):
            x = rng.uniform(1e-6, np.pi - 1e-6, size=size)
            t_pure = bench(pure_fn, x, args.repeats)
            if fast_fn is None:
                print("%-18s %10d %12.2f %12s %9s"
                      % (name, size, 1e6 * t_pure, "-", "-"))
                continue
            t_fast = bench(fast_fn, x, args.repeats)
            a, b = pure_fn(x), fast_fn(x)
            worst = float(np.max(np.abs(np.atleast_1d(a)
                                        - np.atleast_1d(b))))
            assert worst < 1e-13, "backend disagreement %g" % worst
            print("%-18s %10d %12.2f %12.2f %8.1fx"
                  % (name, size, 1e6 * t_pure, 1e6 * t_fast,
                     t_pure / t_fast))


if __name__ == "__main__":
    main()
