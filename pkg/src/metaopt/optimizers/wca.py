"""Water Cycle Algorithm.

References:
    H. Eskandar, A. Sadollah, A. Bahreininejad and M. Hamdi. Water cycle
    algorithm - A novel metaheuristic optimization method for solving
    constrained engineering optimization problems. Computers & Structures (2012).
"""

import numpy as np

from metaopt.optimizers.base import Optimizer

SEA, RIVER, STREAM = 0, 1, 2


def flow(x, target, C, r):
    return x + r * C * (target - x)


def stream_counts(costs, n_streams):
    """Streams per sea/river, proportional to ``|cost - cost_of_first_stream|``.

    ``costs`` holds the sea and river fitnesses followed by the best stream's
    fitness. Rounding uses largest remainders so the counts sum exactly.
    """
    costs = np.asarray(costs, dtype=float)
    weight = np.abs(costs[:-1] - costs[-1])
    if not np.isfinite(weight).all() or weight.sum() == 0.0:
        weight = np.ones_like(weight)
    share = weight / weight.sum() * n_streams
    counts = np.floor(share).astype(int)
    left = n_streams - counts.sum()
    order = np.argsort(-(share - counts), kind="stable")
    counts[order[:left]] += 1
    return counts


class WCA(Optimizer):
    name = "wca"
    description = "Water Cycle Algorithm"
    defaults = {"nsr": 2, "C": 2.0, "d_max": 0.1}
    integer_params = ("nsr",)

    def validate(self):
        self._positive("nsr", "C")
        self._nonnegative("d_max")

    def init_state(self, space, objective, stream):
        m = space.n_agents
        nsr = min(self.nsr, m)
        order = np.argsort(space.fitness, kind="stable")
        role = np.full(m, STREAM)
        leader = np.full(m, -1)
        role[order[0]] = SEA
        role[order[1:nsr]] = RIVER
        leader[order[1:nsr]] = order[0]
        if m > nsr:
            counts = stream_counts(space.fitness[order[:nsr + 1]], m - nsr)
            streams = iter(order[nsr:])
            for slot, count in enumerate(counts):
                for _ in range(count):
                    leader[next(streams)] = order[slot]
        return {"role": role, "leader": leader, "d_max": self.d_max}

    @staticmethod
    def swap(state, a, b):
        """Exchange the roles of agents ``a`` and ``b`` in the hierarchy."""
        role, leader = state["role"], state["leader"]
        role[a], role[b] = role[b], role[a]
        leader[a], leader[b] = leader[b], leader[a]
        to_a, to_b = leader == b, leader == a
        leader[to_a], leader[to_b] = a, b

    def _flow(self, space, objective, state, stream, movers):
        x = space.positions
        if movers.size == 0:
            return
        r = stream.uniform(0.0, 1.0, (movers.size,) + x.shape[1:])
        x[movers] = flow(x[movers], x[state["leader"][movers]], self.C, r)
        space.clip()
        space.fitness[movers] = space.evaluate(objective, x[movers])
        for s in movers:
            target = state["leader"][s]
            if space.fitness[s] < space.fitness[target]:
                self.swap(state, s, target)

    def _step(self, space, objective, state, stream, t, T):
        self._flow(space, objective, state, stream, np.flatnonzero(state["role"] == STREAM))
        self._flow(space, objective, state, stream, np.flatnonzero(state["role"] == RIVER))

        x = space.positions
        sea = int(np.flatnonzero(state["role"] == SEA)[0])
        for river in np.flatnonzero(state["role"] == RIVER):
            if np.linalg.norm(x[sea] - x[river]) < state["d_max"]:
                rained = np.flatnonzero(state["leader"] == river)
                rained = rained[state["role"][rained] == STREAM]
                if rained.size:
                    x[rained] = space.sample(stream, rained.size)
                    space.fitness[rained] = space.evaluate(objective, x[rained])
        state["d_max"] -= state["d_max"] / T
