"""Genetic Programming over expression trees.

References:
    J. R. Koza. Genetic Programming: On the Programming of Computers by
    Means of Natural Selection. MIT Press (1992).
"""

import numpy as np

from metaopt.core import node_metrics
from metaopt.exceptions import InvalidArgumentError
from metaopt.optimizers.base import Optimizer

MAX_RETRIES = 10


def _nodes(tree):
    """Pre-order list of ``(node, parent, slot, depth)``."""
    return list(tree.walk())


def replace_subtree(tree, index, subtree):
    """Return a copy of ``tree`` with its ``index``-th pre-order node replaced."""
    tree = tree.copy()
    node, parent, slot, _ = _nodes(tree)[index]
    if parent is None:
        return subtree
    parent.children[slot] = subtree
    return tree


def swap_subtrees(a, index_a, b, index_b):
    """Exchange the pre-order ``index_a`` subtree of ``a`` with ``index_b`` of ``b``."""
    sub_a = _nodes(a)[index_a][0].copy()
    sub_b = _nodes(b)[index_b][0].copy()
    return replace_subtree(a, index_a, sub_b), replace_subtree(b, index_b, sub_a)


class GP(Optimizer):
    name = "gp"
    description = "Genetic Programming"
    defaults = {"p_reproduction": 0.25, "p_crossover": 0.6, "p_mutation": 0.15,
                "tournament_size": 2}
    integer_params = ("tournament_size",)
    space_kinds = ("tree",)

    def validate(self):
        self._probability("p_reproduction", "p_crossover", "p_mutation")
        self._positive("tournament_size")
        total = self.p_reproduction + self.p_crossover + self.p_mutation
        if abs(total - 1.0) > 1e-9:
            raise InvalidArgumentError(f"gp: operator probabilities must sum to 1, got {total}")

    def tournament(self, space, stream):
        picks = stream.integers(0, space.n_agents, self.tournament_size)
        return space.trees[picks[np.argmin(space.fitness[picks])]]

    def crossover(self, space, stream, a, b):
        for _ in range(MAX_RETRIES):
            ia = stream.integers(0, node_metrics(a)[1])
            ib = stream.integers(0, node_metrics(b)[1])
            ca, cb = swap_subtrees(a, ia, b, ib)
            if space.depth_ok(ca) and space.depth_ok(cb):
                return [ca, cb]
        return [a.copy(), b.copy()]

    def mutate(self, space, stream, tree):
        nodes = _nodes(tree)
        index = stream.integers(0, len(nodes))
        depth = nodes[index][3]
        # growing from the node's own depth keeps the whole tree within both limits
        fresh = space.grow(stream, space.min_depth, space.max_depth, depth=depth)
        return replace_subtree(tree, index, fresh)

    def _step(self, space, objective, state, stream, t, T):
        m = space.n_agents
        offspring = []
        while len(offspring) < m:
            r = stream.uniform()
            if r < self.p_reproduction:
                offspring.append(self.tournament(space, stream).copy())
            elif r < self.p_reproduction + self.p_crossover:
                a = self.tournament(space, stream)
                b = self.tournament(space, stream)
                offspring.extend(self.crossover(space, stream, a, b))
            else:
                offspring.append(self.mutate(space, stream, self.tournament(space, stream)))
        space.trees = offspring[:m]
        space.evaluate_all(objective)
