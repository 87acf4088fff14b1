"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 20]

Compilation happens once before timing. Prints one row per kernel with the
best-of-repeat wall time for each backend and the speedup.
"""

import argparse
import timeit

import numpy as np

from metaopt import kernels
from metaopt._jit import NUMBA_AVAILABLE


def cases(rng):
    X = rng.uniform(-5.0, 5.0, (20_000, 30))
    P = rng.uniform(0.0, 1.0, (5_000, 10, 4))
    lb, ub = np.full(10, -5.0), np.full(10, 5.0)
    F = rng.uniform(-2.0, 2.0, (60, 5, 1))
    fit = np.sum(F[..., 0] ** 2, axis=1)
    alpha = np.full((5, 1), 0.1)
    jitter = rng.uniform(-0.5, 0.5, (60, 60, 5, 1))
    for name in ("sphere", "rastrigin", "rosenbrock", "ackley", "griewank", "schwefel"):
        yield name, f"{X.shape[0]}x{X.shape[1]}", (lambda k, X=X: k(X))
    yield "span", "5000x10x4", lambda k: k(P, lb, ub)
    yield "firefly", "m=60, n=5", lambda k: k(F.copy(), fit.copy(), 1.0, 1.0, alpha, jitter)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<11}{'input':<12}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, label, call in cases(rng):
        fast, slow = kernels.NUMBA_KERNELS[name], kernels.NUMPY_KERNELS[name]
        call(fast)  # compile
        t_np = min(timeit.repeat(lambda: call(slow), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: call(fast), number=1, repeat=args.repeat))
        print(f"{name:<11}{label:<12}{t_np * 1e3:>10.3f}{t_nb * 1e3:>10.3f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
