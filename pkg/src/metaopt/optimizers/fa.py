"""Firefly Algorithm.

References:
    X.-S. Yang. Firefly algorithm, stochastic test functions and design
    optimisation. International Journal of Bio-Inspired Computation (2010).
"""

import numpy as np

from metaopt import kernels
from metaopt.optimizers.base import Optimizer


def attraction(x_i, x_j, beta0, gamma, alpha, jitter):
    """Move firefly ``x_i`` toward brighter ``x_j``; ``jitter`` is the (rand - 0.5) draw."""
    r2 = np.sum((np.asarray(x_i) - x_j) ** 2)
    return x_i + beta0 * np.exp(-gamma * r2) * (x_j - x_i) + alpha * jitter


class FA(Optimizer):
    name = "fa"
    description = "Firefly Algorithm"
    # alpha is relative to each variable's bound width; delta < 1 shrinks it geometrically per iteration
    defaults = {"alpha": 0.5, "beta0": 1.0, "gamma": 1.0, "delta": 1.0}

    def validate(self):
        self._nonnegative("alpha", "beta0", "gamma")
        self._probability("delta")

    def _step(self, space, objective, state, stream, t, T):
        x = space.positions
        m = space.n_agents
        jitter = stream.uniform(0.0, 1.0, (m, m) + x.shape[1:]) - 0.5

        width = space.upper - space.lower
        alpha = np.ascontiguousarray(self.alpha * self.delta ** t * width, dtype=np.float64)
        brightness = space.fitness.copy()
        kernels.firefly(x, brightness, float(self.beta0), float(self.gamma), alpha, jitter)
        space.clip()
        space.evaluate_all(objective)
