"""Optimizer registry keyed by stable identifiers."""

from metaopt.exceptions import InvalidArgumentError
from metaopt.optimizers.abc import ABC
from metaopt.optimizers.ba import BA
from metaopt.optimizers.base import Optimizer
from metaopt.optimizers.bha import BHA
from metaopt.optimizers.cs import CS
from metaopt.optimizers.fa import FA
from metaopt.optimizers.fpa import FPA
from metaopt.optimizers.gp import GP
from metaopt.optimizers.hs import HS, IHS
from metaopt.optimizers.pso import AIWPSO, PSO
from metaopt.optimizers.wca import WCA

OPTIMIZERS = {
    cls.name: cls
    for cls in (ABC, AIWPSO, BA, BHA, CS, FA, FPA, GP, HS, IHS, PSO, WCA)
}


def get_optimizer(name, hyperparams=None) -> Optimizer:
    try:
        cls = OPTIMIZERS[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown optimizer '{name}' (choose from {', '.join(OPTIMIZERS)})"
        ) from None
    return cls(hyperparams)


__all__ = [
    "ABC", "AIWPSO", "BA", "BHA", "CS", "FA", "FPA", "GP", "HS", "IHS", "OPTIMIZERS",
    "Optimizer", "PSO", "WCA", "get_optimizer",
]
