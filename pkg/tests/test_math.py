import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma as gamma_fn

from metaopt.exceptions import InvalidArgumentError
from metaopt.math import (
    BENCHMARKS,
    RandomStream,
    benchmark_eval,
    bernoulli,
    gaussian,
    hyper_span,
    levy,
    levy_sigma,
    uniform,
)
from metaopt.math.benchmark import minimizer

N = 10**6


def hill_tail_index(samples, k):
    x = np.sort(np.abs(samples))[::-1]
    return 1.0 / np.mean(np.log(x[:k] / x[k]))


class TestUniform:
    def test_degenerate(self, stream):
        assert uniform(stream, 0, 0, 3).tolist() == [0.0, 0.0, 0.0]

    def test_mean(self, stream):
        draws = uniform(stream, 0, 1, N)
        assert abs(draws.mean() - 0.5) <= 0.005
        assert draws.min() >= 0.0 and draws.max() < 1.0

    def test_replay(self):
        assert np.array_equal(uniform(RandomStream(9), -1, 1, 50),
                              uniform(RandomStream(9), -1, 1, 50))

    def test_bad_interval(self, stream):
        with pytest.raises(InvalidArgumentError):
            uniform(stream, 1, 0, 3)


class TestGaussian:
    def test_degenerate(self, stream):
        assert np.all(gaussian(stream, 2.5, 0.0, 10) == 2.5)

    def test_variance(self, stream):
        assert abs(gaussian(stream, 0, 1, N).var() - 1.0) <= 0.01

    def test_replay(self):
        assert np.array_equal(gaussian(RandomStream(3), 0, 1, 20),
                              gaussian(RandomStream(3), 0, 1, 20))

    def test_negative_stddev(self, stream):
        with pytest.raises(InvalidArgumentError):
            gaussian(stream, 0, -1, 1)


class TestBernoulli:
    def test_endpoints(self, stream):
        assert np.all(bernoulli(stream, 0.0, 100) == 0)
        assert np.all(bernoulli(stream, 1.0, 100) == 1)

    def test_rate(self, stream):
        assert abs(bernoulli(stream, 0.3, N).mean() - 0.3) <= 0.005

    @pytest.mark.parametrize("p", [-0.1, 1.1])
    def test_bad_p(self, stream, p):
        with pytest.raises(InvalidArgumentError):
            bernoulli(stream, p, 1)


class TestLevy:
    def test_sigma_matches_gamma_oracle(self):
        lam = 1.5
        oracle = (gamma_fn(1 + lam) * math.sin(math.pi * lam / 2)
                  / (gamma_fn((1 + lam) / 2) * lam * 2 ** ((lam - 1) / 2))) ** (1 / lam)
        assert levy_sigma(lam) == pytest.approx(oracle, abs=1e-12)
        assert levy_sigma(lam) == pytest.approx(0.696575, abs=1e-6)

    def test_tail_index(self, stream):
        assert abs(hill_tail_index(levy(stream, 1.5, N), 10_000) - 1.5) <= 0.2

    def test_replay(self):
        assert np.array_equal(levy(RandomStream(5), 1.5, 100), levy(RandomStream(5), 1.5, 100))

    @pytest.mark.parametrize("lam", [1.0, 0.5, 3.5])
    def test_bad_lambda(self, stream, lam):
        with pytest.raises(InvalidArgumentError):
            levy(stream, lam, 1)


class TestHyperSpan:
    @pytest.mark.parametrize("h, expected", [
        ((0, 0, 0, 0), -5.12),
        ((1, 1, 1, 1), 5.12),
        ((0.5, 0.5, 0.5, 0.5), 0.0),
    ])
    def test_examples(self, h, expected):
        assert hyper_span(h, -5.12, 5.12) == pytest.approx(expected, abs=1e-15)

    def test_out_of_cube(self):
        with pytest.raises(InvalidArgumentError):
            hyper_span((0.2, 1.5), 0, 1)

    @given(st.lists(st.floats(0, 1), min_size=2, max_size=8),
           st.lists(st.floats(0, 1), min_size=2, max_size=8))
    def test_monotone_and_in_range(self, a, b):
        d = min(len(a), len(b))
        a, b = np.array(a[:d]), np.array(b[:d])
        va, vb = hyper_span(a, -3.0, 7.0), hyper_span(b, -3.0, 7.0)
        assert -3.0 <= va <= 7.0
        if np.linalg.norm(a) <= np.linalg.norm(b):
            assert va <= vb


class TestBenchmarks:
    def test_examples(self):
        assert benchmark_eval("sphere", [1, 2]) == 5.0
        assert benchmark_eval("rastrigin", [0, 0]) == 0.0
        assert benchmark_eval("rosenbrock", [1, 1]) == 0.0

    def test_unknown(self):
        with pytest.raises(InvalidArgumentError):
            benchmark_eval("booth", [0.0])

    @pytest.mark.parametrize("name", list(BENCHMARKS))
    def test_global_minimum(self, name):
        for n in (1, 2, 5):
            assert abs(benchmark_eval(name, minimizer(name, n))) <= 1e-9

    @settings(max_examples=300)
    @given(st.sampled_from(sorted(BENCHMARKS)),
           st.lists(st.floats(-500, 500), min_size=1, max_size=6))
    def test_non_negative(self, name, x):
        assert benchmark_eval(name, x) >= -1e-9
