"""Harmony Search and Improved Harmony Search.

References:
    Z. W. Geem, J. H. Kim and G. V. Loganathan. A new heuristic optimization
    algorithm: harmony search. Simulation (2001).

    M. Mahdavi, M. Fesanghary and E. Damangir. An improved harmony search
    algorithm for solving optimization problems.
    Applied Mathematics and Computation (2007).
"""

import math

import numpy as np

from metaopt.exceptions import InvalidArgumentError
from metaopt.optimizers.base import Optimizer


def pitch_adjust(value, bw, draw, sign):
    return value + sign * bw * draw


def par_schedule(t, T, par_min, par_max):
    return par_min + (par_max - par_min) * t / T


def bw_schedule(t, T, bw_min, bw_max):
    return bw_max * math.exp(math.log(bw_min / bw_max) * t / T)


class HS(Optimizer):
    name = "hs"
    description = "Harmony Search"
    defaults = {"HMCR": 0.7, "PAR": 0.7, "bw": 1.0}

    def validate(self):
        self._probability("HMCR", "PAR")
        self._nonnegative("bw")

    def _rates(self, t, T):
        return self.PAR, self.bw

    def improvise(self, space, stream, par, bw):
        """Compose one new harmony variable by variable."""
        x = space.positions
        m, n, _ = x.shape
        consider = stream.uniform(0.0, 1.0, n)
        member = stream.integers(0, m, n)
        adjust = stream.uniform(0.0, 1.0, n)
        sign = np.where(stream.uniform(0.0, 1.0, n) < 0.5, -1.0, 1.0)
        amount = stream.uniform(0.0, 1.0, x.shape[1:])
        fresh = space.sample(stream, 1)[0]

        harmony = fresh.copy()
        for i in range(n):
            if consider[i] < self.HMCR:
                harmony[i] = x[member[i], i]
                if adjust[i] < par:
                    harmony[i] = pitch_adjust(harmony[i], bw, amount[i], sign[i])
        return harmony

    def _step(self, space, objective, state, stream, t, T):
        par, bw = self._rates(t, T)
        harmony = self.improvise(space, stream, par, bw)[None]
        space.clip(harmony)
        fit = space.evaluate(objective, harmony)[0]
        worst = int(np.argmax(space.fitness))
        if fit < space.fitness[worst]:
            space.positions[worst] = harmony[0]
            space.fitness[worst] = fit


class IHS(HS):
    name = "ihs"
    description = "Improved Harmony Search"
    defaults = {"HMCR": 0.7, "PAR_min": 0.0, "PAR_max": 1.0, "bw_min": 1.0, "bw_max": 10.0}

    def validate(self):
        self._probability("HMCR", "PAR_min", "PAR_max")
        self._positive("bw_min", "bw_max")
        if self.PAR_min > self.PAR_max or self.bw_min > self.bw_max:
            raise InvalidArgumentError("ihs: minimum rates must not exceed maximum rates")

    def _rates(self, t, T):
        return (par_schedule(t, T, self.PAR_min, self.PAR_max),
                bw_schedule(t, T, self.bw_min, self.bw_max))
