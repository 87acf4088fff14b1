"""Black Hole Algorithm.

References:
    A. Hatamlou. Black hole: A new heuristic optimization approach for data
    clustering. Information Sciences (2013).
"""

import numpy as np

from metaopt.optimizers.base import Optimizer


def attract(x, x_bh, r):
    return x + r * (x_bh - x)


def event_horizon(f_bh, fitness):
    """Absorption radius ``|f_bh| / sum |f_i|``; zero when every fitness is zero."""
    total = float(np.sum(np.abs(fitness)))
    return abs(f_bh) / total if total > 0.0 else 0.0


class BHA(Optimizer):
    name = "bha"
    description = "Black Hole Algorithm"
    defaults = {}

    def _step(self, space, objective, state, stream, t, T):
        x = space.positions
        m = space.n_agents
        r = stream.uniform(0.0, 1.0, m)

        bh = int(np.argmin(space.fitness))
        stars = np.arange(m) != bh
        x[stars] = attract(x[stars], x[bh], r[stars, None, None])
        space.clip()
        space.fitness[stars] = space.evaluate(objective, x[stars])

        # a star that outshines the black hole takes its place
        bh = int(np.argmin(space.fitness))
        radius = event_horizon(space.fitness[bh], space.fitness)
        dist = np.sqrt(np.sum((x - x[bh]) ** 2, axis=(1, 2)))
        absorbed = (dist < radius) & (np.arange(m) != bh)
        k = int(absorbed.sum())
        if k:
            x[absorbed] = space.sample(stream, k)
            space.fitness[absorbed] = space.evaluate(objective, x[absorbed])
