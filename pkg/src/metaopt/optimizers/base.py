"""Optimizer base class and hyperparameter checks."""

from __future__ import annotations

import logging

from metaopt.exceptions import InvalidArgumentError, InvalidStateError

logger = logging.getLogger(__name__)


class Optimizer:
    """One meta-heuristic update strategy.

    Subclasses declare ``name``, ``defaults`` and implement :meth:`init_state`
    and :meth:`_step`. A step performs one full population pass: it moves
    agents, clips them into the space and refreshes their fitness.
    """

    name = None
    description = ""
    defaults = {}
    integer_params = ()
    space_kinds = ("search", "hyper")

    def __init__(self, hyperparams=None):
        params = dict(self.defaults)
        for key, value in (hyperparams or {}).items():
            if key not in self.defaults:
                raise InvalidArgumentError(
                    f"{self.name}: unknown hyperparameter '{key}' "
                    f"(expected one of {', '.join(sorted(self.defaults))})"
                )
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidArgumentError(f"{self.name}: '{key}' must be a number")
            if key in self.integer_params:
                if int(value) != value:
                    raise InvalidArgumentError(f"{self.name}: '{key}' must be an integer")
                value = int(value)
            else:
                value = float(value)
            params[key] = value
        self.hyperparams = params
        self.validate()

    def __getattr__(self, key):
        try:
            return self.__dict__["hyperparams"][key]
        except KeyError:
            raise AttributeError(key) from None

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.hyperparams.items())
        return f"{type(self).__name__}({args})"

    def validate(self):
        """Range checks; overridden per algorithm."""

    def _probability(self, *keys):
        for key in keys:
            if not 0.0 <= self.hyperparams[key] <= 1.0:
                raise InvalidArgumentError(f"{self.name}: '{key}' must lie in [0, 1]")

    def _positive(self, *keys):
        for key in keys:
            if not self.hyperparams[key] > 0:
                raise InvalidArgumentError(f"{self.name}: '{key}' must be positive")

    def _nonnegative(self, *keys):
        for key in keys:
            if not self.hyperparams[key] >= 0:
                raise InvalidArgumentError(f"{self.name}: '{key}' must be non-negative")

    def check_space(self, space):
        if space.kind not in self.space_kinds:
            raise InvalidArgumentError(
                f"{self.name} runs on {' or '.join(self.space_kinds)} spaces, not '{space.kind}'"
            )

    def init_state(self, space, objective, stream) -> dict:
        """Build per-run state from an evaluated space."""
        return {}

    def step(self, space, objective, state, stream, t, T):
        if state is None:
            raise InvalidStateError(f"{self.name}: state is not initialized; call init_state first")
        self._step(space, objective, state, stream, t, T)

    def _step(self, space, objective, state, stream, t, T):
        raise NotImplementedError
