"""Hypercomplex span mapping."""

import math

import numpy as np

from metaopt.exceptions import InvalidArgumentError


def hyper_span(h, lb: float, ub: float) -> float:
    """Map a unit-cube component vector to ``lb + (ub - lb) * ||h|| / sqrt(d)``."""
    h = np.asarray(h, dtype=float).ravel()
    if h.size == 0:
        raise InvalidArgumentError("component vector must be non-empty")
    if np.any(h < 0.0) or np.any(h > 1.0):
        raise InvalidArgumentError("hypercomplex components must lie in [0, 1]")
    if not lb < ub:
        raise InvalidArgumentError("lower bound must be below upper bound")
    return float(lb + (ub - lb) * math.sqrt(float(np.dot(h, h))) / math.sqrt(h.size))
