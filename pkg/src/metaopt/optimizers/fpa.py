"""Flower Pollination Algorithm.

References:
    X.-S. Yang, M. Karamanoglu and X. He. Flower pollination algorithm: a
    novel approach for multiobjective optimization. Engineering Optimization (2014).
"""

import numpy as np

from metaopt.math.random import levy
from metaopt.exceptions import InvalidArgumentError
from metaopt.optimizers.base import Optimizer


def global_pollination(x, g, step):
    return x + step * (g - x)


def local_pollination(x, x_j, x_k, eps):
    return x + eps * (x_j - x_k)


class FPA(Optimizer):
    name = "fpa"
    description = "Flower Pollination Algorithm"
    defaults = {"p": 0.8, "lambda": 1.5}

    def validate(self):
        self._probability("p")
        if not 1.0 < self.hyperparams["lambda"] <= 3.0:
            raise InvalidArgumentError("fpa: 'lambda' must lie in (1, 3]")

    def _step(self, space, objective, state, stream, t, T):
        x = space.positions
        m = space.n_agents
        switch = stream.uniform(0.0, 1.0, m)
        step = levy(stream, self.hyperparams["lambda"], m)
        eps = stream.uniform(0.0, 1.0, m)
        j = stream.integers(0, m, m)
        k = (j + stream.integers(1, max(m, 2), m)) % m

        use_global = (switch < self.p)[:, None, None]
        cand = np.where(
            use_global,
            global_pollination(x, space.best_position, step[:, None, None]),
            local_pollination(x, x[j], x[k], eps[:, None, None]),
        )
        space.clip(cand)
        cand_fit = space.evaluate(objective, cand)
        better = cand_fit < space.fitness
        x[better] = cand[better]
        space.fitness[better] = cand_fit[better]
