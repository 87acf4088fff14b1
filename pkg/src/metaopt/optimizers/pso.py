"""Particle Swarm Optimization and its adaptive-inertia variant.

References:
    J. Kennedy and R. Eberhart. Particle swarm optimization.
    Proceedings of ICNN'95 (1995).

    A. Nickabadi, M. M. Ebadzadeh and R. Safabakhsh. A novel particle swarm
    optimization algorithm with adaptive inertia weight.
    Applied Soft Computing (2011).
"""

import numpy as np

from metaopt.exceptions import InvalidArgumentError
from metaopt.optimizers.base import Optimizer


def velocity_update(v, x, p, g, w, c1, c2, r1, r2):
    return w * v + c1 * r1 * (p - x) + c2 * r2 * (g - x)


def adaptive_inertia(success_rate, w_min, w_max):
    return (w_max - w_min) * success_rate + w_min


class PSO(Optimizer):
    name = "pso"
    description = "Particle Swarm Optimization"
    defaults = {"w": 0.7, "c1": 1.7, "c2": 1.7}

    def validate(self):
        self._nonnegative("w", "c1", "c2")

    def init_state(self, space, objective, stream):
        return {
            "velocity": np.zeros_like(space.positions),
            "local_position": space.positions.copy(),
            "local_fitness": space.fitness.copy(),
        }

    def _inertia(self, state):
        return self.w

    def _step(self, space, objective, state, stream, t, T):
        x = space.positions
        r1 = stream.uniform(0.0, 1.0, x.shape)
        r2 = stream.uniform(0.0, 1.0, x.shape)
        g = space.best_position
        v = velocity_update(state["velocity"], x, state["local_position"], g,
                            self._inertia(state), self.c1, self.c2, r1, r2)
        state["velocity"] = v
        x += v
        space.clip()
        space.evaluate_all(objective)

        improved = space.fitness < state["local_fitness"]
        state["local_position"][improved] = x[improved]
        state["local_fitness"][improved] = space.fitness[improved]
        return improved


class AIWPSO(PSO):
    name = "aiwpso"
    description = "Adaptive Inertia Weight Particle Swarm Optimization"
    defaults = {"w_min": 0.1, "w_max": 0.9, "c1": 1.7, "c2": 1.7}

    def validate(self):
        self._nonnegative("w_min", "w_max", "c1", "c2")
        if self.w_min > self.w_max:
            raise InvalidArgumentError("aiwpso: w_min must not exceed w_max")

    def init_state(self, space, objective, stream):
        state = super().init_state(space, objective, stream)
        state["w"] = self.w_max
        return state

    def _inertia(self, state):
        return state["w"]

    def _step(self, space, objective, state, stream, t, T):
        improved = super()._step(space, objective, state, stream, t, T)
        # success is counted against each particle's own memory
        state["w"] = adaptive_inertia(improved.mean(), self.w_min, self.w_max)
        return improved
