"""Classical benchmark functions.

Each entry maps a name to its batch kernel, a one-line description and a
documented global minimizer for ``n`` variables.
"""

import numpy as np

from metaopt import kernels
from metaopt.exceptions import InvalidArgumentError

SCHWEFEL_MINIMIZER = 420.968746359982027

BENCHMARKS = {
    "sphere": ("Unimodal, separable bowl; sum of squares.", 0.0),
    "rastrigin": ("Highly multimodal, separable; cosine-modulated bowl.", 0.0),
    "rosenbrock": ("Unimodal narrow curved valley; non-separable.", 1.0),
    "ackley": ("Multimodal with a nearly flat outer region; non-separable.", 0.0),
    "griewank": ("Multimodal with product coupling; non-separable.", 0.0),
    "schwefel": ("Deceptive multimodal; optimum near the domain edge.", SCHWEFEL_MINIMIZER),
}


def minimizer(name: str, n: int) -> np.ndarray:
    return np.full(n, BENCHMARKS[_check(name)][1])


def _check(name):
    if name not in BENCHMARKS:
        raise InvalidArgumentError(
            f"unknown benchmark '{name}' (choose from {', '.join(BENCHMARKS)})"
        )
    return name


def benchmark_batch(name: str, X) -> np.ndarray:
    """Evaluate benchmark ``name`` on every row of ``X``."""
    X = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    if X.shape[1] == 0:
        raise InvalidArgumentError("benchmark input must be non-empty")
    return getattr(kernels, _check(name))(X)


def benchmark_eval(name: str, x) -> float:
    return float(benchmark_batch(name, np.asarray(x, dtype=float).reshape(1, -1))[0])
