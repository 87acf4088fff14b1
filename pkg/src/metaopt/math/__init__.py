"""Random streams, distributions, hypercomplex span and benchmark functions."""

from metaopt.math.benchmark import BENCHMARKS, benchmark_eval
from metaopt.math.hyper import hyper_span
from metaopt.math.random import (
    RandomStream,
    bernoulli,
    gaussian,
    levy,
    levy_sigma,
    uniform,
)

__all__ = [
    "BENCHMARKS",
    "RandomStream",
    "benchmark_eval",
    "bernoulli",
    "gaussian",
    "hyper_span",
    "levy",
    "levy_sigma",
    "uniform",
]
