"""Bat Algorithm.

References:
    X.-S. Yang and A. H. Gandomi. Bat algorithm: a novel approach for global
    engineering optimization. Engineering Computations (2012).
"""

import numpy as np

from metaopt.exceptions import InvalidArgumentError
from metaopt.optimizers.base import Optimizer


def frequency(beta, f_min, f_max):
    return f_min + (f_max - f_min) * beta


def bat_move(x, v, g, freq):
    """Return ``(new_velocity, new_position)`` for one bat."""
    v = v + (x - g) * freq
    return v, x + v


class BA(Optimizer):
    name = "ba"
    description = "Bat Algorithm"
    defaults = {"f_min": 0.0, "f_max": 2.0, "A": 0.5, "r": 0.5, "alpha": 0.9, "gamma": 0.9}

    def validate(self):
        self._probability("A", "r", "alpha")
        self._nonnegative("gamma")
        if self.f_min > self.f_max:
            raise InvalidArgumentError("ba: f_min must not exceed f_max")

    def init_state(self, space, objective, stream):
        m = space.n_agents
        return {
            "frequency": np.zeros(m),
            "velocity": np.zeros_like(space.positions),
            "loudness": np.full(m, self.A),
            "pulse_rate": np.full(m, self.r),
        }

    def _step(self, space, objective, state, stream, t, T):
        x = space.positions
        m = space.n_agents
        beta = stream.uniform(0.0, 1.0, m)
        walk_draw = stream.uniform(0.0, 1.0, m)
        eps = stream.uniform(-1.0, 1.0, x.shape)
        accept_draw = stream.uniform(0.0, 1.0, m)

        g = space.best_position
        freq = frequency(beta, self.f_min, self.f_max)
        state["frequency"] = freq
        v, cand = bat_move(x, state["velocity"], g, freq[:, None, None])
        state["velocity"] = v

        walk = walk_draw > state["pulse_rate"]
        mean_loudness = state["loudness"].mean()
        cand[walk] = g + eps[walk] * mean_loudness
        space.clip(cand)
        cand_fit = space.evaluate(objective, cand)

        accept = (accept_draw < state["loudness"]) & (cand_fit < space.fitness)
        x[accept] = cand[accept]
        space.fitness[accept] = cand_fit[accept]
        state["loudness"][accept] *= self.alpha
        state["pulse_rate"][accept] = self.r * (1.0 - np.exp(-self.gamma * t))
