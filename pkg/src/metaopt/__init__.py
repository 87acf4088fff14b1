"""Nature-inspired meta-heuristic optimization toolkit."""

from metaopt.core import Agent, Node, agent_new, clip_to_bounds, node_evaluate, node_metrics
from metaopt.engine import History, RunResult, run
from metaopt.exceptions import (
    ConfigError,
    EvaluationError,
    InvalidArgumentError,
    InvalidStateError,
    MetaoptError,
)

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "ConfigError",
    "EvaluationError",
    "History",
    "InvalidArgumentError",
    "InvalidStateError",
    "MetaoptError",
    "Node",
    "RunResult",
    "agent_new",
    "clip_to_bounds",
    "node_evaluate",
    "node_metrics",
    "run",
]
