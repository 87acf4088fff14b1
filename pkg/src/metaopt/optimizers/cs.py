"""Cuckoo Search.

References:
    X.-S. Yang and S. Deb. Cuckoo search via Lévy flights.
    World Congress on Nature & Biologically Inspired Computing (2009).
"""

import math

import numpy as np

from metaopt.math.random import levy
from metaopt.exceptions import InvalidArgumentError
from metaopt.optimizers.base import Optimizer


def levy_move(x, g, step, alpha):
    return x + alpha * step * (x - g)


def n_abandoned(m, pa):
    return int(math.floor(pa * m))


class CS(Optimizer):
    name = "cs"
    description = "Cuckoo Search"
    # alpha is relative to each variable's bound width
    defaults = {"alpha": 0.01, "pa": 0.25, "lambda": 1.5}

    def validate(self):
        self._nonnegative("alpha")
        self._probability("pa")
        if not 1.0 < self.hyperparams["lambda"] <= 3.0:
            raise InvalidArgumentError("cs: 'lambda' must lie in (1, 3]")

    def _step(self, space, objective, state, stream, t, T):
        x = space.positions
        m = space.n_agents
        step = levy(stream, self.hyperparams["lambda"], x.shape)
        targets = stream.integers(0, m, m)

        width = space.upper - space.lower
        cand = levy_move(x, space.best_position, step, self.alpha * width)
        space.clip(cand)
        cand_fit = space.evaluate(objective, cand)
        for i in range(m):
            j = targets[i]
            if cand_fit[i] < space.fitness[j]:
                x[j] = cand[i]
                space.fitness[j] = cand_fit[i]

        k = n_abandoned(m, self.pa)
        if k:
            worst = np.argsort(space.fitness, kind="stable")[m - k:]
            x[worst] = space.sample(stream, k)
            space.fitness[worst] = space.evaluate(objective, x[worst])
