"""Hot numeric kernels.

Every kernel exists twice: an explicit-loop version meant for ``numba.njit``
and a vectorized numpy version. ``metaopt._jit.USE_NUMBA`` decides which one
the public names below point at. Both take and return float64 arrays and
consume no randomness, so callers draw first and hand the draws in.

The two paths agree to rounding error, not bit for bit (summation order and
libm differ), so a run is reproducible within one mode.
"""

import math

import numpy as np

from metaopt import _jit

SCHWEFEL_CONSTANT = 418.982887272433706


# ---------------------------------------------------------------------------
# Loop versions (numba targets)
# ---------------------------------------------------------------------------

def _sphere_loop(X):
    k, n = X.shape
    out = np.empty(k)
    for a in range(k):
        s = 0.0
        for i in range(n):
            s += X[a, i] * X[a, i]
        out[a] = s
    return out


def _rastrigin_loop(X):
    k, n = X.shape
    out = np.empty(k)
    for a in range(k):
        s = 10.0 * n
        for i in range(n):
            x = X[a, i]
            s += x * x - 10.0 * math.cos(2.0 * math.pi * x)
        out[a] = s
    return out


def _rosenbrock_loop(X):
    k, n = X.shape
    out = np.empty(k)
    for a in range(k):
        s = 0.0
        for i in range(n - 1):
            x = X[a, i]
            d = X[a, i + 1] - x * x
            s += 100.0 * d * d + (1.0 - x) * (1.0 - x)
        out[a] = s
    return out


def _ackley_loop(X):
    k, n = X.shape
    out = np.empty(k)
    for a in range(k):
        sq = 0.0
        cs = 0.0
        for i in range(n):
            x = X[a, i]
            sq += x * x
            cs += math.cos(2.0 * math.pi * x)
        out[a] = (-20.0 * math.exp(-0.2 * math.sqrt(sq / n))
                  - math.exp(cs / n) + 20.0 + math.e)
    return out


def _griewank_loop(X):
    k, n = X.shape
    out = np.empty(k)
    for a in range(k):
        s = 0.0
        p = 1.0
        for i in range(n):
            x = X[a, i]
            s += x * x
            p *= math.cos(x / math.sqrt(i + 1.0))
        out[a] = 1.0 + s / 4000.0 - p
    return out


def _schwefel_loop(X):
    k, n = X.shape
    out = np.empty(k)
    for a in range(k):
        s = 0.0
        for i in range(n):
            x = X[a, i]
            s += x * math.sin(math.sqrt(abs(x)))
        out[a] = SCHWEFEL_CONSTANT * n - s
    return out


def _span_loop(P, lb, ub):
    m, n, d = P.shape
    out = np.empty((m, n))
    root_d = math.sqrt(d)
    for a in range(m):
        for i in range(n):
            s = 0.0
            for j in range(d):
                s += P[a, i, j] * P[a, i, j]
            out[a, i] = lb[i] + (ub[i] - lb[i]) * math.sqrt(s) / root_d
    return out


def _firefly_loop(X, fitness, beta0, gamma, alpha, jitter):
    """Sequential firefly sweep; ``jitter[i, j]`` holds the (rand - 0.5) draws for pair (i, j)."""
    m, n, d = X.shape
    moved = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        for j in range(m):
            if fitness[j] < fitness[i]:
                r2 = 0.0
                for v in range(n):
                    for c in range(d):
                        diff = X[i, v, c] - X[j, v, c]
                        r2 += diff * diff
                beta = beta0 * math.exp(-gamma * r2)
                for v in range(n):
                    for c in range(d):
                        X[i, v, c] += (beta * (X[j, v, c] - X[i, v, c])
                                       + alpha[v, c] * jitter[i, j, v, c])
                moved[i] = True
    return moved


# ---------------------------------------------------------------------------
# Numpy versions
# ---------------------------------------------------------------------------

def _sphere_np(X):
    return np.sum(X * X, axis=1)


def _rastrigin_np(X):
    n = X.shape[1]
    return 10.0 * n + np.sum(X * X - 10.0 * np.cos(2.0 * np.pi * X), axis=1)


def _rosenbrock_np(X):
    a, b = X[:, :-1], X[:, 1:]
    return np.sum(100.0 * (b - a * a) ** 2 + (1.0 - a) ** 2, axis=1)


def _ackley_np(X):
    n = X.shape[1]
    return (-20.0 * np.exp(-0.2 * np.sqrt(np.sum(X * X, axis=1) / n))
            - np.exp(np.sum(np.cos(2.0 * np.pi * X), axis=1) / n) + 20.0 + np.e)


def _griewank_np(X):
    idx = np.sqrt(np.arange(1, X.shape[1] + 1, dtype=float))
    return 1.0 + np.sum(X * X, axis=1) / 4000.0 - np.prod(np.cos(X / idx), axis=1)


def _schwefel_np(X):
    n = X.shape[1]
    return SCHWEFEL_CONSTANT * n - np.sum(X * np.sin(np.sqrt(np.abs(X))), axis=1)


def _span_np(P, lb, ub):
    d = P.shape[2]
    return lb + (ub - lb) * np.sqrt(np.sum(P * P, axis=2)) / math.sqrt(d)


def _firefly_np(X, fitness, beta0, gamma, alpha, jitter):
    # i-rows update in place and feed later pairs, so only the inner vector math is vectorized
    m = X.shape[0]
    moved = np.zeros(m, dtype=bool)
    for i in range(m):
        for j in np.flatnonzero(fitness < fitness[i]):
            r2 = np.sum((X[i] - X[j]) ** 2)
            X[i] += beta0 * np.exp(-gamma * r2) * (X[j] - X[i]) + alpha * jitter[i, j]
            moved[i] = True
    return moved


NUMPY_KERNELS = {
    "sphere": _sphere_np,
    "rastrigin": _rastrigin_np,
    "rosenbrock": _rosenbrock_np,
    "ackley": _ackley_np,
    "griewank": _griewank_np,
    "schwefel": _schwefel_np,
    "span": _span_np,
    "firefly": _firefly_np,
}

_LOOPS = {
    "sphere": _sphere_loop,
    "rastrigin": _rastrigin_loop,
    "rosenbrock": _rosenbrock_loop,
    "ackley": _ackley_loop,
    "griewank": _griewank_loop,
    "schwefel": _schwefel_loop,
    "span": _span_loop,
    "firefly": _firefly_loop,
}

if _jit.NUMBA_AVAILABLE:
    NUMBA_KERNELS = {name: _jit.njit(fn) for name, fn in _LOOPS.items()}
else:  # pragma: no cover
    NUMBA_KERNELS = {}

KERNELS = NUMBA_KERNELS if _jit.USE_NUMBA else NUMPY_KERNELS
BACKEND = "numba" if _jit.USE_NUMBA else "numpy"

sphere = KERNELS["sphere"]
rastrigin = KERNELS["rastrigin"]
rosenbrock = KERNELS["rosenbrock"]
ackley = KERNELS["ackley"]
griewank = KERNELS["griewank"]
schwefel = KERNELS["schwefel"]
span = KERNELS["span"]
firefly = KERNELS["firefly"]
