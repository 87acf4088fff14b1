import math

import numpy as np
import pytest

from metaopt.core import Node, node_metrics
from metaopt.engine import run
from metaopt.exceptions import InvalidArgumentError, InvalidStateError
from metaopt.math import RandomStream
from metaopt.objective import BenchmarkFunction
from metaopt.optimizers import OPTIMIZERS, get_optimizer
from metaopt.optimizers.abc import fitness_transform, neighbour
from metaopt.optimizers.ba import bat_move, frequency
from metaopt.optimizers.bha import attract, event_horizon
from metaopt.optimizers.cs import levy_move, n_abandoned
from metaopt.optimizers.fa import attraction
from metaopt.optimizers.fpa import global_pollination, local_pollination
from metaopt.optimizers.gp import swap_subtrees
from metaopt.optimizers.hs import bw_schedule, par_schedule, pitch_adjust
from metaopt.optimizers.pso import adaptive_inertia, velocity_update
from metaopt.optimizers.wca import flow, stream_counts
from metaopt.spaces import init_search_space, init_tree_space

from conftest import regression_config, sphere_config

VECTOR = sorted(n for n in OPTIMIZERS if n != "gp")


def prepared(name, hyperparams=None, m=10, n=3, seed=0):
    stream = RandomStream(seed)
    space = init_search_space(m, n, 20, [-2.0] * n, [2.0] * n, stream)
    objective = BenchmarkFunction("sphere", n)
    space.evaluate_all(objective)
    space.update_best()
    opt = get_optimizer(name, hyperparams)
    state = opt.init_state(space, objective, stream)
    return opt, space, objective, state, stream


def test_registry_has_twelve():
    assert sorted(OPTIMIZERS) == ["abc", "aiwpso", "ba", "bha", "cs", "fa", "fpa", "gp",
                                  "hs", "ihs", "pso", "wca"]


@pytest.mark.parametrize("name", sorted(OPTIMIZERS))
def test_unknown_hyperparameter_rejected(name):
    with pytest.raises(InvalidArgumentError, match="unknown hyperparameter"):
        get_optimizer(name, {"bogus": 1.0})


@pytest.mark.parametrize("name, params", [
    ("hs", {"HMCR": 1.5}), ("cs", {"pa": -0.1}), ("fpa", {"lambda": 0.5}),
    ("gp", {"p_crossover": 0.9}), ("aiwpso", {"w_min": 0.95}), ("wca", {"nsr": 0}),
    ("abc", {"limit": 2.5}), ("pso", {"w": "fast"}),
])
def test_out_of_range_hyperparameter(name, params):
    with pytest.raises(InvalidArgumentError):
        get_optimizer(name, params)


@pytest.mark.parametrize("name", VECTOR)
def test_uninitialized_state(name):
    opt, space, objective, _, stream = prepared(name)
    with pytest.raises(InvalidStateError):
        opt.step(space, objective, None, stream, 1, 20)


@pytest.mark.parametrize("name", VECTOR)
def test_step_preserves_shapes_and_bounds(name):
    opt, space, objective, state, stream = prepared(name)
    shapes = {k: np.shape(v) for k, v in state.items()}
    for t in range(1, 21):
        opt.step(space, objective, state, stream, t, 20)
        assert space.positions.shape == (10, 3, 1)
        assert np.all((space.positions >= -2.0) & (space.positions <= 2.0))
        assert np.array_equal(space.fitness, objective.evaluate_batch(space.positions[..., 0]))
        assert {k: np.shape(v) for k, v in state.items()} == shapes


class TestPSO:
    def test_hand_update(self):
        v = velocity_update(0.0, 1.0, 0.5, 0.0, 0.7, 1.7, 1.7, 0.5, 0.5)
        assert v == pytest.approx(-1.275, abs=1e-15)
        assert 1.0 + v == pytest.approx(-0.275, abs=1e-15)

    def test_fixed_point(self):
        assert velocity_update(0.0, 2.0, 2.0, 2.0, 0.7, 1.7, 1.7, 0.3, 0.9) == 0.0

    @pytest.mark.parametrize("name", ["pso", "aiwpso"])
    def test_null_coefficients(self, name):
        params = ({"w": 0.0, "c1": 0.0, "c2": 0.0} if name == "pso"
                  else {"w_min": 0.0, "w_max": 0.0, "c1": 0.0, "c2": 0.0})
        opt, space, objective, state, stream = prepared(name, params)
        before = space.positions.copy()
        for t in range(1, 6):
            opt.step(space, objective, state, stream, t, 20)
        assert np.array_equal(space.positions, before)

    @pytest.mark.parametrize("s, expected", [(1.0, 0.9), (0.0, 0.1), (0.5, 0.5)])
    def test_adaptive_inertia(self, s, expected):
        assert adaptive_inertia(s, 0.1, 0.9) == pytest.approx(expected, abs=1e-15)


class TestBA:
    def test_hand_update(self):
        f = frequency(0.5, 0.0, 2.0)
        v, x = bat_move(1.0, 0.0, 0.0, f)
        assert (f, v, x) == (1.0, 1.0, 2.0)

    def test_fixed_point(self):
        assert bat_move(3.0, 0.0, 3.0, 1.7) == (0.0, 3.0)

    def test_loudness_decay(self):
        opt, space, objective, state, stream = prepared("ba", {"A": 1.0, "alpha": 0.9})
        state["loudness"][:] = 0.5
        loud = state["loudness"].copy()
        opt.step(space, objective, state, stream, 1, 20)
        changed = state["loudness"] != loud
        assert np.allclose(state["loudness"][changed], 0.45)
        assert np.allclose(state["pulse_rate"][changed], 1.0 - math.exp(-0.9))


class TestBHA:
    def test_attraction(self):
        assert attract(1.0, 0.0, 0.5) == 0.5
        assert attract(2.5, 2.5, 0.7) == 2.5

    def test_horizon(self):
        assert event_horizon(1.0, [1.0, 4.0, 5.0]) == pytest.approx(0.1)
        assert event_horizon(0.0, [0.0, 0.0]) == 0.0

    def test_black_hole_never_absorbed(self):
        opt, space, objective, state, stream = prepared("bha")
        for t in range(1, 21):
            best_before = space.fitness.min()
            opt.step(space, objective, state, stream, t, 20)
            assert space.fitness.min() <= best_before


class TestCS:
    def test_null_step(self):
        x = np.array([1.0, -2.0])
        assert np.array_equal(levy_move(x, np.zeros(2), np.array([5.0, -9.0]), 0.0), x)

    @pytest.mark.parametrize("m, pa, k", [(10, 0.25, 2), (10, 0.0, 0), (30, 0.25, 7)])
    def test_abandon_count(self, m, pa, k):
        assert n_abandoned(m, pa) == k

    def test_zero_step_only_copies_better_nests(self):
        opt, space, objective, state, stream = prepared("cs", {"alpha": 0.0, "pa": 0.0})
        before, fit = space.positions.copy(), space.fitness.copy()
        opt.step(space, objective, state, stream, 1, 20)
        assert np.all(space.fitness <= fit)
        for row in space.positions:
            assert any(np.array_equal(row, b) for b in before)


class TestFA:
    def test_hand_update(self):
        x = attraction(np.array([1.0]), np.array([0.0]), 1.0, 1.0, 0.0, 0.0)
        assert x[0] == pytest.approx(1.0 - math.exp(-1.0), abs=1e-15)
        assert x[0] == pytest.approx(0.6321, abs=1e-4)

    def test_attraction_vanishes_for_large_gamma(self):
        x = attraction(np.array([1.0]), np.array([0.0]), 1.0, 1e6, 0.3, 0.25)
        assert x[0] == pytest.approx(1.0 + 0.3 * 0.25)

    def test_brightest_stays_without_jitter(self):
        opt, space, objective, state, stream = prepared("fa", {"alpha": 0.0})
        best = int(np.argmin(space.fitness))
        kept = space.positions[best].copy()
        opt.step(space, objective, state, stream, 1, 20)
        assert np.array_equal(space.positions[best], kept)


class TestFPA:
    def test_fixed_points(self):
        x = np.array([0.4, -1.0])
        assert np.array_equal(global_pollination(x, x, 3.7), x)
        assert np.array_equal(local_pollination(x, x + 1, x + 1, 0.6), x)

    def test_switch_probability_one(self):
        stream = RandomStream(0)
        assert np.all(stream.uniform(0.0, 1.0, 10_000) < 1.0)
        opt, space, objective, state, stream = prepared("fpa", {"p": 1.0})
        # global moves target g; with g == x for every agent nothing moves
        space.positions[:] = space.best_position
        space.evaluate_all(objective)
        before = space.positions.copy()
        opt.step(space, objective, state, stream, 1, 20)
        assert np.array_equal(space.positions, before)


class TestHS:
    def test_pitch_adjust(self):
        assert pitch_adjust(0.5, 0.1, 1.0, +1) == pytest.approx(0.6)

    def test_pure_recombination(self):
        opt, space, _, _, stream = prepared("hs", {"HMCR": 1.0, "PAR": 0.0})
        for _ in range(50):
            h = opt.improvise(space, stream, 0.0, opt.bw)
            for i in range(space.n_variables):
                assert any(np.array_equal(h[i], space.positions[a, i])
                           for a in range(space.n_agents))

    def test_worse_harmony_leaves_memory(self):
        opt, space, objective, state, stream = prepared("hs", {"HMCR": 1.0, "PAR": 0.0}, m=1)
        before = space.positions.copy()
        for t in range(1, 10):
            opt.step(space, objective, state, stream, t, 20)
        assert np.array_equal(space.positions, before)

    def test_ihs_schedules(self):
        assert par_schedule(0, 10, 0.0, 1.0) == 0.0
        assert bw_schedule(0, 10, 1.0, 10.0) == 10.0
        assert par_schedule(10, 10, 0.0, 1.0) == 1.0
        assert bw_schedule(10, 10, 1.0, 10.0) == pytest.approx(1.0, abs=1e-15)
        assert bw_schedule(5, 10, 1.0, 10.0) == pytest.approx(math.sqrt(10.0), abs=1e-12)


class TestABC:
    def test_neighbour(self):
        assert neighbour(1.0, 0.0, 0.5) == 1.5
        assert neighbour(1.0, 0.0, 0.0) == 1.0

    def test_fitness_transform(self):
        assert fitness_transform(0.0) == 1.0
        assert fitness_transform(3.0) == pytest.approx(0.25)
        assert fitness_transform(-2.0) == pytest.approx(3.0)

    def test_ties_increment_trials(self):
        opt, space, objective, state, stream = prepared("abc", {"limit": 1000}, m=1)
        opt.step(space, objective, state, stream, 1, 20)
        # m = 1: the partner is the source itself, so every move is a tie
        assert space.trials[0] == 2

    def test_scout_resets(self):
        opt, space, objective, state, stream = prepared("abc", {"limit": 0}, m=1)
        before = space.positions.copy()
        opt.step(space, objective, state, stream, 1, 20)
        assert space.trials[0] == 0
        assert not np.array_equal(space.positions, before)


class TestWCA:
    def test_flow(self):
        assert flow(1.0, 0.0, 2.0, 0.5) == 0.0
        assert flow(0.3, 0.3, 2.0, 0.9) == 0.3

    def test_stream_counts_sum(self):
        counts = stream_counts([0.0, 1.0, 2.0, 5.0], 27)
        assert counts.sum() == 27
        assert counts[0] >= counts[1] >= counts[2]

    def test_hierarchy(self):
        opt, space, objective, state, stream = prepared("wca", m=12)
        role, leader = state["role"], state["leader"]
        assert (role == 0).sum() == 1 and (role == 1).sum() == 1
        sea = int(np.argmin(space.fitness))
        assert role[sea] == 0
        for t in range(1, 15):
            opt.step(space, objective, state, stream, t, 20)
            sea = int(np.flatnonzero(role == 0)[0])
            assert space.fitness[sea] == space.fitness.min()
            assert np.all(role[leader[role == 2]] != 2)

    def test_d_max_decay(self):
        opt, space, objective, state, stream = prepared("wca", {"d_max": 0.1})
        opt.step(space, objective, state, stream, 1, 10)
        assert state["d_max"] == pytest.approx(0.09, abs=1e-15)


class TestGP:
    def test_subtree_swap(self):
        a, b, c, d = (Node.variable(i) for i in range(4))
        left = Node.function("+", a, b)
        right = Node.function("*", c, d)
        new_left, new_right = swap_subtrees(left, 1, right, 2)
        assert new_left.to_expression() == "(x[3] + x[1])"
        assert new_right.to_expression() == "(x[2] * x[0])"
        assert left.to_expression() == "(x[0] + x[1])"

    def _space(self, max_depth=3):
        stream = RandomStream(4)
        space = init_tree_space(20, ["x[0]", "const"], ["+", "-", "*"], 1, max_depth, 5, stream)
        X = np.linspace(-1, 1, 10)[:, None]
        space.set_samples(X, X[:, 0] ** 2)
        space.evaluate_all()
        space.update_best()
        return space, stream

    def test_reproduction_only(self):
        space, stream = self._space()
        parents = {t.to_expression() for t in space.trees}
        opt = get_optimizer("gp", {"p_reproduction": 1.0, "p_crossover": 0.0,
                                   "p_mutation": 0.0})
        opt.step(space, None, {}, stream, 1, 5)
        assert {t.to_expression() for t in space.trees} <= parents

    def test_mutation_at_depth_limit_gives_terminal(self):
        space, stream = self._space(max_depth=1)
        opt = get_optimizer("gp")
        for _ in range(20):
            child = opt.mutate(space, stream, space.trees[0])
            for node, _, _, depth in child.walk():
                if depth == 1:
                    assert node.is_terminal

    def test_depth_respected(self):
        space, stream = self._space(max_depth=4)
        opt = get_optimizer("gp")
        for t in range(1, 30):
            opt.step(space, None, {}, stream, t, 30)
            assert all(1 <= node_metrics(tree)[0] <= 4 for tree in space.trees)

    def test_gp_requires_tree_space(self):
        opt, space, objective, state, stream = prepared("pso")
        with pytest.raises(InvalidArgumentError):
            get_optimizer("gp").check_space(space)


@pytest.mark.parametrize("name", VECTOR)
def test_best_so_far_non_increasing_and_deterministic(name):
    a = run(sphere_config(name, m=10, T=30, seed=3))
    b = run(sphere_config(name, m=10, T=30, seed=3))
    assert np.all(np.diff(a.history.best_fitness) <= 0)
    assert np.array_equal(a.history.best_fitness, b.history.best_fitness)
    assert all(np.array_equal(ra.positions, rb.positions)
               for ra, rb in zip(a.history.records, b.history.records))


def test_gp_run_deterministic():
    a = run(regression_config(seed=2, m=20, T=15))
    b = run(regression_config(seed=2, m=20, T=15))
    assert [r.positions for r in a.history.records] == [r.positions for r in b.history.records]
