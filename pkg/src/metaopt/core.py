"""Agents, expression-tree nodes and bound handling."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np

from metaopt.exceptions import InvalidArgumentError

MAX_FITNESS = sys.float_info.max

# Protection threshold for tree arithmetic.
PROTECT_EPS = 1e-12

TERMINAL = "TERMINAL"
FUNCTION = "FUNCTION"

ARITY = {
    "+": 2,
    "-": 2,
    "*": 2,
    "/": 2,
    "exp": 1,
    "sqrt": 1,
    "log": 1,
    "abs": 1,
}


@dataclass
class Agent:
    """One candidate solution: a (n_variables, n_dimensions) position and its fitness."""

    position: np.ndarray
    fitness: float = MAX_FITNESS
    trial_counter: int = 0

    @property
    def n_variables(self) -> int:
        return self.position.shape[0]

    @property
    def n_dimensions(self) -> int:
        return self.position.shape[1]

    def copy(self) -> "Agent":
        return Agent(self.position.copy(), self.fitness, self.trial_counter)


def agent_new(n_variables: int, n_dimensions: int) -> Agent:
    if int(n_variables) < 1 or int(n_dimensions) < 1:
        raise InvalidArgumentError(
            f"agent shape must be positive, got ({n_variables}, {n_dimensions})"
        )
    return Agent(np.zeros((int(n_variables), int(n_dimensions))))


def clip_to_bounds(agent: Agent, lower_bound, upper_bound) -> Agent:
    """Clamp every component of ``agent.position`` row-wise into ``[lower_bound, upper_bound]``.

    The agent is modified in place and returned.
    """
    lb = np.asarray(lower_bound, dtype=float)
    ub = np.asarray(upper_bound, dtype=float)
    n = agent.position.shape[0]
    if lb.shape != (n,) or ub.shape != (n,):
        raise InvalidArgumentError(
            f"bounds must have length {n}, got {lb.shape} and {ub.shape}"
        )
    np.clip(agent.position, lb[:, None], ub[:, None], out=agent.position)
    return agent


@dataclass
class Node:
    """Expression-tree node used by genetic programming.

    Terminals carry either ``constant_value`` or ``variable_index``; function
    nodes carry one child per operand of ``label``.
    """

    kind: str
    label: str
    constant_value: Optional[float] = None
    variable_index: Optional[int] = None
    children: List["Node"] = field(default_factory=list)

    def __post_init__(self):
        if self.kind == TERMINAL:
            if self.children:
                raise InvalidArgumentError("terminal nodes cannot have children")
            if (self.constant_value is None) == (self.variable_index is None):
                raise InvalidArgumentError(
                    "a terminal needs exactly one of constant_value / variable_index"
                )
        elif self.kind == FUNCTION:
            if self.label not in ARITY:
                raise InvalidArgumentError(f"unknown operator '{self.label}'")
            if len(self.children) != ARITY[self.label]:
                raise InvalidArgumentError(
                    f"operator '{self.label}' takes {ARITY[self.label]} children, "
                    f"got {len(self.children)}"
                )
        else:
            raise InvalidArgumentError(f"unknown node kind '{self.kind}'")

    @classmethod
    def constant(cls, value: float) -> "Node":
        return cls(TERMINAL, repr(float(value)), constant_value=float(value))

    @classmethod
    def variable(cls, index: int) -> "Node":
        if index < 0:
            raise InvalidArgumentError("variable index must be non-negative")
        return cls(TERMINAL, f"x[{index}]", variable_index=int(index))

    @classmethod
    def function(cls, label: str, *children: "Node") -> "Node":
        return cls(FUNCTION, label, children=list(children))

    @property
    def is_terminal(self) -> bool:
        return self.kind == TERMINAL

    def copy(self) -> "Node":
        return Node(
            self.kind,
            self.label,
            self.constant_value,
            self.variable_index,
            [c.copy() for c in self.children],
        )

    def walk(self, depth: int = 0) -> Iterator[tuple]:
        """Yield ``(node, parent, child_slot, depth)`` in pre-order."""
        stack = [(self, None, -1, depth)]
        while stack:
            node, parent, slot, d = stack.pop()
            yield node, parent, slot, d
            for k in range(len(node.children) - 1, -1, -1):
                stack.append((node.children[k], node, k, d + 1))

    def max_variable_index(self) -> int:
        """Largest referenced variable index, or -1 if none."""
        return max(
            (n.variable_index for n, *_ in self.walk() if n.variable_index is not None),
            default=-1,
        )

    def to_expression(self) -> str:
        """Render as a fully parenthesized expression in the objective grammar."""
        if self.kind == TERMINAL:
            if self.variable_index is not None:
                return f"x[{self.variable_index}]"
            v = self.constant_value
            return repr(v) if v >= 0 else f"(-{repr(-v)})"
        args = [c.to_expression() for c in self.children]
        if len(args) == 2:
            return f"({args[0]} {self.label} {args[1]})"
        return f"{self.label}({args[0]})"

    def __str__(self) -> str:
        return self.to_expression()


def node_metrics(root: Node) -> tuple:
    """Return ``(depth, node_count)``; a lone terminal has depth 0."""
    depth = 0
    count = 0
    for _, _, _, d in root.walk():
        count += 1
        depth = max(depth, d)
    return depth, count


def _apply(label, args):
    if label == "+":
        return args[0] + args[1]
    if label == "-":
        return args[0] - args[1]
    if label == "*":
        return args[0] * args[1]
    if label == "/":
        a, b = args
        small = np.abs(b) < PROTECT_EPS
        return np.where(small, 1.0, a / np.where(small, 1.0, b))
    if label == "exp":
        return np.exp(args[0])
    if label == "sqrt":
        return np.sqrt(np.abs(args[0]))
    if label == "log":
        return np.log(np.maximum(np.abs(args[0]), PROTECT_EPS))
    if label == "abs":
        return np.abs(args[0])
    raise InvalidArgumentError(f"unknown operator '{label}'")


def evaluate_tree(root: Node, X: np.ndarray) -> np.ndarray:
    """Evaluate ``root`` on every row of ``X`` (shape (k, n)) at once."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    need = root.max_variable_index()
    if need >= X.shape[1]:
        raise InvalidArgumentError(
            f"tree references x[{need}] but inputs have {X.shape[1]} variables"
        )
    with np.errstate(over="ignore", invalid="ignore"):
        return _eval(root, X)


def _eval(node: Node, X: np.ndarray) -> np.ndarray:
    if node.kind == TERMINAL:
        if node.variable_index is not None:
            return X[:, node.variable_index]
        return np.full(X.shape[0], node.constant_value)
    return _apply(node.label, [_eval(c, X) for c in node.children])


def node_evaluate(root: Node, x) -> float:
    """Evaluate a tree at a single point with protected division, log and sqrt."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    return float(evaluate_tree(root, x)[0])
