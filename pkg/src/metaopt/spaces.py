"""Search spaces: real-valued boxes, hypercomplex unit cubes and tree populations."""

from __future__ import annotations

from typing import List, Sequence

import numpy as np

from metaopt import kernels
from metaopt.core import (
    ARITY,
    FUNCTION,
    MAX_FITNESS,
    Agent,
    Node,
    evaluate_tree,
    node_metrics,
)
from metaopt.exceptions import InvalidArgumentError
from metaopt.math.hyper import hyper_span


def _bounds(n_variables, lower_bound, upper_bound):
    lb = np.asarray(lower_bound, dtype=float).ravel()
    ub = np.asarray(upper_bound, dtype=float).ravel()
    if lb.shape != (n_variables,) or ub.shape != (n_variables,):
        raise InvalidArgumentError(
            f"bounds must have length n_variables={n_variables}, "
            f"got {lb.size} and {ub.size}"
        )
    if not np.all(np.isfinite(lb)) or not np.all(np.isfinite(ub)):
        raise InvalidArgumentError("bounds must be finite")
    if not np.all(lb < ub):
        raise InvalidArgumentError("every lower bound must be strictly below its upper bound")
    return lb, ub


def _positive(name, value):
    if int(value) != value or int(value) < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value}")
    return int(value)


class SearchSpace:
    """Population of ``n_agents`` real vectors inside a box.

    Positions are stored as one ``(n_agents, n_variables, n_dimensions)``
    array; optimizers move ``positions`` and keep ``fitness`` in sync.
    ``best_position``/``best_fitness`` hold a copy of the best point seen so
    far, while ``best_index`` points at the best member of the current
    population.
    """

    kind = "search"

    def __init__(self, n_agents, n_variables, n_iterations, lower_bound, upper_bound,
                 n_dimensions=1):
        self.n_agents = _positive("n_agents", n_agents)
        self.n_variables = _positive("n_variables", n_variables)
        self.n_iterations = _positive("n_iterations", n_iterations)
        self.n_dimensions = _positive("n_dimensions", n_dimensions)
        self.lower_bound, self.upper_bound = _bounds(self.n_variables, lower_bound, upper_bound)

        shape = (self.n_agents, self.n_variables, self.n_dimensions)
        self.positions = np.zeros(shape)
        self.fitness = np.full(self.n_agents, MAX_FITNESS)
        self.trials = np.zeros(self.n_agents, dtype=np.int64)
        self.best_index = 0
        self.best_position = np.zeros((self.n_variables, self.n_dimensions))
        self.best_fitness = MAX_FITNESS

    # component-level box seen by the optimizers
    @property
    def lower(self) -> np.ndarray:
        return np.broadcast_to(self.lower_bound[:, None], (self.n_variables, self.n_dimensions))

    @property
    def upper(self) -> np.ndarray:
        return np.broadcast_to(self.upper_bound[:, None], (self.n_variables, self.n_dimensions))

    @property
    def agents(self) -> List[Agent]:
        return [self.agent(i) for i in range(self.n_agents)]

    def agent(self, i) -> Agent:
        if not 0 <= i < self.n_agents:
            raise InvalidArgumentError(f"agent index {i} out of range")
        return Agent(self.positions[i].copy(), float(self.fitness[i]), int(self.trials[i]))

    def initialize(self, stream) -> "SearchSpace":
        self.positions[:] = self.sample(stream, self.n_agents)
        self.fitness[:] = MAX_FITNESS
        self.trials[:] = 0
        self.best_index = 0
        return self

    def sample(self, stream, k) -> np.ndarray:
        """Draw ``k`` fresh positions uniformly inside the component box."""
        shape = (k, self.n_variables, self.n_dimensions)
        return stream.uniform(self.lower, self.upper, shape)

    def clip(self, P=None) -> np.ndarray:
        if P is None:
            P = self.positions
        return np.clip(P, self.lower, self.upper, out=P)

    def materialize(self, P=None) -> np.ndarray:
        """Real decision vectors, shape ``(k, n_variables)``."""
        if P is None:
            P = self.positions
        return P[..., 0] if P.ndim == 3 else P[:, 0]

    def evaluate(self, objective, P=None) -> np.ndarray:
        """Fitness of positions ``P`` (the current population by default)."""
        if P is None:
            P = self.positions
        return objective.evaluate_batch(self.materialize(np.asarray(P)))

    def evaluate_all(self, objective) -> None:
        self.fitness[:] = self.evaluate(objective)

    def update_best(self) -> int:
        """Point ``best_index`` at the lowest fitness (lowest index on ties).

        The best-so-far copy only changes on strict improvement.
        """
        self.best_index = int(np.argmin(self.fitness))
        if self.fitness[self.best_index] < self.best_fitness:
            self.best_fitness = float(self.fitness[self.best_index])
            self.best_position = self.positions[self.best_index].copy()
        return self.best_index

    def best_real(self) -> np.ndarray:
        return self.materialize(self.best_position[None])[0]


class HyperSpace(SearchSpace):
    """Each variable carries ``n_dimensions`` components in [0, 1], spanned to a real value."""

    kind = "hyper"

    def __init__(self, n_agents, n_variables, n_dimensions, n_iterations, lower_bound,
                 upper_bound):
        if int(n_dimensions) < 2:
            raise InvalidArgumentError("hypercomplex spaces need n_dimensions >= 2")
        super().__init__(n_agents, n_variables, n_iterations, lower_bound, upper_bound,
                         n_dimensions=n_dimensions)

    @property
    def lower(self):
        return np.zeros((self.n_variables, self.n_dimensions))

    @property
    def upper(self):
        return np.ones((self.n_variables, self.n_dimensions))

    def materialize(self, P=None) -> np.ndarray:
        if P is None:
            P = self.positions
        P = np.ascontiguousarray(P, dtype=np.float64)
        return kernels.span(P, self.lower_bound, self.upper_bound)

    def hyper_materialize(self, agent_index) -> np.ndarray:
        if not 0 <= agent_index < self.n_agents:
            raise InvalidArgumentError(f"agent index {agent_index} out of range")
        row = self.positions[agent_index]
        return np.array([
            hyper_span(row[i], self.lower_bound[i], self.upper_bound[i])
            for i in range(self.n_variables)
        ])


def init_search_space(m, n_variables, T, lower_bound, upper_bound, stream) -> SearchSpace:
    return SearchSpace(m, n_variables, T, lower_bound, upper_bound).initialize(stream)


def init_hyper_space(m, n_variables, d, T, lower_bound, upper_bound, stream) -> HyperSpace:
    return HyperSpace(m, n_variables, d, T, lower_bound, upper_bound).initialize(stream)


def hyper_materialize(space: HyperSpace, agent_index) -> np.ndarray:
    return space.hyper_materialize(agent_index)


def space_update_best(space):
    space.update_best()
    return space


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------

CONSTANT_TERMINAL = "const"


def _parse_terminal(label):
    if label == CONSTANT_TERMINAL:
        return None
    if label.startswith("x[") and label.endswith("]") and label[2:-1].isdigit():
        return int(label[2:-1])
    raise InvalidArgumentError(
        f"terminal '{label}' must be 'x[<index>]' or '{CONSTANT_TERMINAL}'"
    )


class TreeSpace:
    """Population of expression trees for genetic programming.

    Fitness of a tree is the sum of squared errors between the tree and a
    target objective over a fixed set of sample points.
    """

    kind = "tree"

    def __init__(self, n_trees, terminals: Sequence[str], functions: Sequence[str],
                 min_depth, max_depth, n_iterations, constant_range=(-1.0, 1.0)):
        self.n_agents = _positive("n_trees", n_trees)
        self.n_iterations = _positive("n_iterations", n_iterations)
        terminals = list(terminals)
        functions = list(functions)
        if not terminals:
            raise InvalidArgumentError("terminal set must be non-empty")
        if not functions:
            raise InvalidArgumentError("function set must be non-empty")
        for f in functions:
            if f not in ARITY:
                raise InvalidArgumentError(
                    f"unknown function node '{f}' (choose from {', '.join(ARITY)})"
                )
        self.variable_terminals = [_parse_terminal(t) for t in terminals]
        if not 0 <= int(min_depth) <= int(max_depth):
            raise InvalidArgumentError("need 0 <= min_depth <= max_depth")
        c_lo, c_hi = (float(c) for c in constant_range)
        if not c_lo <= c_hi:
            raise InvalidArgumentError("constant range must satisfy lo <= hi")
        self.terminals = terminals
        self.functions = functions
        self.min_depth = int(min_depth)
        self.max_depth = int(max_depth)
        self.constant_range = (c_lo, c_hi)
        self.n_variables = max([v for v in self.variable_terminals if v is not None] + [-1]) + 1

        self.trees: List[Node] = []
        self.fitness = np.full(self.n_agents, MAX_FITNESS)
        self.best_index = 0
        self.best_tree: Node = None
        self.best_fitness = MAX_FITNESS
        self.samples = None
        self.targets = None

    def set_samples(self, X, y):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] < self.n_variables:
            raise InvalidArgumentError(
                f"terminals reference {self.n_variables} variables, samples have {X.shape[1]}"
            )
        self.samples = X
        self.targets = np.asarray(y, dtype=float).ravel()

    def new_terminal(self, stream) -> Node:
        var = self.variable_terminals[stream.integers(len(self.variable_terminals))]
        if var is None:
            return Node.constant(stream.uniform(*self.constant_range))
        return Node.variable(var)

    def grow(self, stream, min_depth, max_depth, depth=0) -> Node:
        """Grow-method tree: function nodes forced below ``min_depth``, terminals at ``max_depth``."""
        if depth >= max_depth:
            use_function = False
        elif depth < min_depth:
            use_function = True
        else:
            use_function = stream.uniform() < 0.5
        if not use_function:
            return self.new_terminal(stream)
        label = self.functions[stream.integers(len(self.functions))]
        children = [self.grow(stream, min_depth, max_depth, depth + 1)
                    for _ in range(ARITY[label])]
        return Node(FUNCTION, label, children=children)

    def initialize(self, stream) -> "TreeSpace":
        self.trees = [self.grow(stream, self.min_depth, self.max_depth)
                      for _ in range(self.n_agents)]
        self.fitness[:] = MAX_FITNESS
        self.best_index = 0
        return self

    def depth_ok(self, tree: Node) -> bool:
        depth, _ = node_metrics(tree)
        return self.min_depth <= depth <= self.max_depth

    def tree_fitness(self, tree: Node) -> float:
        """Sum of squared errors on the sample set; non-finite errors map to the worst fitness."""
        with np.errstate(over="ignore", invalid="ignore"):
            err = evaluate_tree(tree, self.samples) - self.targets
            sse = float(np.sum(err * err))
        return sse if np.isfinite(sse) else MAX_FITNESS

    def evaluate(self, objective=None, trees=None) -> np.ndarray:
        if self.samples is None:
            raise InvalidArgumentError("sample points are not set")
        trees = self.trees if trees is None else trees
        return np.array([self.tree_fitness(t) for t in trees])

    def evaluate_all(self, objective=None) -> None:
        self.fitness[:] = self.evaluate(objective)

    def clip(self, P=None):
        return None

    def update_best(self) -> int:
        self.best_index = int(np.argmin(self.fitness))
        if self.fitness[self.best_index] < self.best_fitness:
            self.best_fitness = float(self.fitness[self.best_index])
            self.best_tree = self.trees[self.best_index].copy()
        return self.best_index


def init_tree_space(m, terminals, functions, min_depth, max_depth, T, stream,
                    constant_range=(-1.0, 1.0)) -> TreeSpace:
    return TreeSpace(m, terminals, functions, min_depth, max_depth, T,
                     constant_range).initialize(stream)
