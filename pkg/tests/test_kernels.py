import numpy as np
import pytest

from metaopt import kernels
from metaopt._jit import NUMBA_AVAILABLE
from metaopt.math import RandomStream

pytestmark = pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")

BENCH = ["sphere", "rastrigin", "rosenbrock", "ackley", "griewank", "schwefel"]


@pytest.mark.parametrize("name", BENCH)
def test_benchmarks_agree(name):
    X = RandomStream(0).uniform(-10.0, 10.0, (200, 7))
    jit = kernels.NUMBA_KERNELS[name](X)
    ref = kernels.NUMPY_KERNELS[name](X)
    np.testing.assert_allclose(jit, ref, rtol=1e-12, atol=1e-12)


def test_span_agrees():
    P = RandomStream(1).uniform(0.0, 1.0, (50, 3, 4))
    lb, ub = np.array([-1.0, 0.0, 10.0]), np.array([1.0, 5.0, 12.0])
    np.testing.assert_allclose(kernels.NUMBA_KERNELS["span"](P, lb, ub),
                               kernels.NUMPY_KERNELS["span"](P, lb, ub), rtol=0, atol=1e-14)


def test_firefly_agrees():
    s = RandomStream(2)
    X = s.uniform(-2.0, 2.0, (12, 3, 1))
    fit = np.sum(X[..., 0] ** 2, axis=1)
    alpha = np.full((3, 1), 0.2)
    jitter = s.uniform(-0.5, 0.5, (12, 12, 3, 1))
    a, b = X.copy(), X.copy()
    moved_a = kernels.NUMBA_KERNELS["firefly"](a, fit.copy(), 1.0, 1.0, alpha, jitter)
    moved_b = kernels.NUMPY_KERNELS["firefly"](b, fit.copy(), 1.0, 1.0, alpha, jitter)
    assert np.array_equal(moved_a, moved_b)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-13)


def test_backend_label():
    assert kernels.BACKEND in ("numba", "numpy")
