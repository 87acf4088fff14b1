"""Artificial Bee Colony.

References:
    D. Karaboga and B. Basturk. A powerful and efficient algorithm for
    numerical function optimization: artificial bee colony (ABC) algorithm.
    Journal of Global Optimization (2007).
"""

import numpy as np

from metaopt.optimizers.base import Optimizer


def neighbour(x_ij, x_kj, phi):
    return x_ij + phi * (x_ij - x_kj)


def fitness_transform(f):
    f = np.asarray(f, dtype=float)
    return np.where(f >= 0, 1.0 / (1.0 + np.abs(f)), 1.0 + np.abs(f))


class ABC(Optimizer):
    name = "abc"
    description = "Artificial Bee Colony"
    defaults = {"limit": 10}
    integer_params = ("limit",)

    def validate(self):
        self._nonnegative("limit")

    def _forage(self, space, objective, stream, sources):
        """Employed-bee move for each index in ``sources``, applied in order."""
        x = space.positions
        m = space.n_agents
        k = len(sources)
        offset = stream.integers(1, max(m, 2), k)
        var = stream.integers(0, space.n_variables, k)
        phi = stream.uniform(-1.0, 1.0, (k, space.n_dimensions))
        for a, i in enumerate(sources):
            partner = (i + offset[a]) % m
            cand = x[i].copy()
            cand[var[a]] = neighbour(x[i, var[a]], x[partner, var[a]], phi[a])
            space.clip(cand[None])
            fit = space.evaluate(objective, cand[None])[0]
            if fit < space.fitness[i]:
                x[i] = cand
                space.fitness[i] = fit
                space.trials[i] = 0
            else:
                space.trials[i] += 1

    def _step(self, space, objective, state, stream, t, T):
        m = space.n_agents
        self._forage(space, objective, stream, np.arange(m))

        fit = fitness_transform(space.fitness)
        chosen = stream.choice(m, size=m, p=fit / fit.sum())
        self._forage(space, objective, stream, chosen)

        scouts = np.flatnonzero(space.trials > self.limit)
        if scouts.size:
            space.positions[scouts] = space.sample(stream, scouts.size)
            space.fitness[scouts] = space.evaluate(objective, space.positions[scouts])
            space.trials[scouts] = 0
