"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--N 12]

Prints one line per kernel with the best time of each backend and the
speedup.  Both backends get identical inputs.
"""

import argparse
import sys
import timeit

import numpy as np

from periodic_jacobi import kernels


def cases(N: int, a: float):
    alpha = list(2 * a * np.cos(2 * np.pi * np.arange(N) / N))
    off = [1.0] * (N - 1)
    big = list(np.random.default_rng(0).normal(size=200))
    xs = np.linspace(-2.5, 2.5, 2000)
    zs = np.linspace(-2, 2, 200) + 0.3j
    return {
        "sturm_count (n=200)": lambda kb: kb.sturm_count(big, big[:-1], 0.1),
        f"tridiag_eigvals (n={N})": lambda kb: kb.tridiag_eigvals(alpha, off, 0.0),
        "tridiag_eigvals (n=200)": lambda kb: kb.tridiag_eigvals(big, big[:-1], 0.0),
        f"recurrence_table (n={8 * N}, 2000 x)": lambda kb: kb.recurrence_table(alpha, 8 * N, xs, False, True),
        "recurrence_table (n=60, scalar x)": lambda kb: kb.recurrence_table(alpha, 60, 0.37, False, False),
        "continued_fraction (depth 400, 200 z)": lambda kb: kb.continued_fraction(alpha, zs, 400),
        "continued_fraction (depth 400, scalar z)": lambda kb: kb.continued_fraction(alpha, 0.3 + 0.2j, 400),
    }


def best_time(fn, repeat: int) -> float:
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--N", type=int, default=12, help="period used for the structured inputs")
    ap.add_argument("--a", type=float, default=0.9)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; nothing to compare", file=sys.stderr)
        return 1
    py, cy = backends["python"], backends["cython"]
    print(f"{'kernel':<44}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, call in cases(args.N, args.a).items():
        tp = best_time(lambda: call(py), args.repeat)
        tc = best_time(lambda: call(cy), args.repeat)
        print(f"{name:<44}{tp * 1e6:>10.1f}us{tc * 1e6:>10.1f}us{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
