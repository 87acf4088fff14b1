import pytest

from metaopt.config import ObjectiveConfig, RunConfig, SpaceConfig
from metaopt.math import RandomStream


@pytest.fixture
def stream():
    return RandomStream(1234)


def sphere_config(optimizer="pso", m=20, T=50, n=2, seed=0, hyperparams=None, kind="search",
                  d=4, light=False):
    space = SpaceConfig(kind, m, T, n, [-5.12] * n, [5.12] * n, n_dimensions=d)
    return RunConfig(optimizer, space, ObjectiveConfig("benchmark", name="sphere"),
                     dict(hyperparams or {}), seed=seed, light=light)


def regression_config(seed=0, m=50, T=100, max_depth=5, expression="x[0]^2"):
    space = SpaceConfig("tree", m, T, 1, terminals=["x[0]", "const"], functions=["+", "-", "*"],
                        min_depth=1, max_depth=max_depth, n_samples=20,
                        sample_lower=[-1.0], sample_upper=[1.0])
    return RunConfig("gp", space, ObjectiveConfig("expression", expression=expression), seed=seed)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
