"""Objective functions: plain callables, benchmarks, weighted sums and parsed expressions.

Expression grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := unary ("^" factor)?          # right-associative
    unary  := "-" unary | atom
    atom   := number | "x" "[" integer "]" | ident "(" expr ")" | "(" expr ")"

``ident`` is one of sin, cos, tan, exp, log, sqrt, abs. Whitespace is
ignored; U+2212 is accepted as a minus sign.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from metaopt.exceptions import EvaluationError, InvalidArgumentError
from metaopt.math.benchmark import benchmark_batch, _check as _check_benchmark

DIVISION_EPS = 1e-12


class ObjectiveFunction:
    """Wrap ``evaluator(x) -> float`` for vectors of length ``arity``.

    ``negate=True`` turns a maximization problem into minimization.
    """

    def __init__(self, evaluator: Callable, arity: int, label: str = "f", negate: bool = False):
        if int(arity) < 1:
            raise InvalidArgumentError("arity must be positive")
        self.evaluator = evaluator
        self.arity = int(arity)
        self.label = label
        self.negate = bool(negate)

    def __repr__(self):
        return f"{type(self).__name__}({self.label!r}, arity={self.arity})"

    def _raw(self, x: np.ndarray) -> float:
        return float(self.evaluator(x))

    def __call__(self, x) -> float:
        return evaluate(self, x)

    def evaluate_batch(self, X) -> np.ndarray:
        """Evaluate each row of ``X``; raises on arity mismatch or non-finite output."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        _check_arity(self, X.shape[1])
        values = self._raw_batch(X)
        if self.negate:
            values = -values
        bad = ~np.isfinite(values)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise EvaluationError(
                f"{self.label} returned {values[k]} at x={X[k].tolist()}", x=X[k].copy()
            )
        return values

    def _raw_batch(self, X: np.ndarray) -> np.ndarray:
        return np.array([self._raw(row) for row in X], dtype=float)


class BenchmarkFunction(ObjectiveFunction):
    """A named benchmark evaluated through the batch kernels."""

    def __init__(self, name: str, arity: int, negate: bool = False):
        _check_benchmark(name)
        super().__init__(None, arity, label=name, negate=negate)
        self.name = name

    def _raw(self, x):
        return float(benchmark_batch(self.name, x.reshape(1, -1))[0])

    def _raw_batch(self, X):
        return benchmark_batch(self.name, X)


class ExpressionFunction(ObjectiveFunction):
    def __init__(self, text: str, arity: int = None, negate: bool = False):
        self.ast = parse_expression(text)
        needed = max_variable_index(self.ast) + 1
        if arity is None:
            arity = max(needed, 1)
        if needed > arity:
            raise InvalidArgumentError(
                f"expression references x[{needed - 1}] but only {arity} variables exist"
            )
        super().__init__(None, arity, label=text, negate=negate)

    def _raw(self, x):
        return eval_expression(self.ast, x)


class WeightedFunction(ObjectiveFunction):
    """Weighted sum of objectives sharing one arity."""

    def __init__(self, functions: Sequence[ObjectiveFunction], weights: Sequence[float], negate=False):
        functions = list(functions)
        weights = [float(w) for w in weights]
        if not functions:
            raise InvalidArgumentError("at least one function is required")
        if len(functions) != len(weights):
            raise InvalidArgumentError(
                f"{len(functions)} functions but {len(weights)} weights"
            )
        arities = {f.arity for f in functions}
        if len(arities) != 1:
            raise InvalidArgumentError(f"functions disagree on arity: {sorted(arities)}")
        label = " + ".join(f"{w!r}*[{f.label}]" for f, w in zip(functions, weights))
        super().__init__(None, arities.pop(), label=label, negate=negate)
        self.functions = functions
        self.weights = weights

    def _raw(self, x):
        return weighted_evaluate(self, x)

    def _raw_batch(self, X):
        total = np.zeros(X.shape[0])
        for f, w in zip(self.functions, self.weights):
            total = total + w * f.evaluate_batch(X)
        return total


def _check_arity(f, n):
    if n != f.arity:
        raise InvalidArgumentError(f"{f.label} expects {f.arity} variables, got {n}")


def evaluate(f: ObjectiveFunction, x) -> float:
    x = np.asarray(x, dtype=float).ravel()
    _check_arity(f, x.size)
    value = f._raw(x)
    if f.negate:
        value = -value
    if not math.isfinite(value):
        raise EvaluationError(f"{f.label} returned {value} at x={x.tolist()}", x=x.copy())
    return value


def weighted_evaluate(wf: WeightedFunction, x) -> float:
    x = np.asarray(x, dtype=float).ravel()
    total = 0.0
    for f, w in zip(wf.functions, wf.weights):
        total += w * evaluate(f, x)
    return total


# ---------------------------------------------------------------------------
# Expression AST
# ---------------------------------------------------------------------------

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]


class ExpressionSyntaxError(InvalidArgumentError):
    """Parse failure; ``offset`` is a byte offset into the UTF-8 source."""

    def __init__(self, message, text, char_pos):
        self.offset = len(text[:char_pos].encode("utf-8"))
        self.text = text
        super().__init__(f"{message} at offset {self.offset}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()\[\]−])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if value == "−":
                value = "-"
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        found = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ExpressionSyntaxError(f"{message}, found {found}", self.text, tok[2])

    def expect(self, value, what):
        tok = self.peek()
        if tok[1] != value or tok[0] == "end":
            self.fail(f"expected {what}")
        return self.next()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected trailing input")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.next()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.next()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        base = self.unary()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.next()
            return BinOp("^", base, self.factor())
        return base

    def unary(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.next()
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "num":
            self.next()
            return Num(float(value))
        if kind == "ident":
            self.next()
            if value == "x":
                self.expect("[", "'[' after 'x'")
                tok = self.peek()
                if tok[0] != "num" or not tok[1].isdigit():
                    self.fail("malformed variable reference, expected a non-negative integer index")
                self.next()
                self.expect("]", "']' closing variable reference")
                return Var(int(tok[1]))
            if value not in FUNCTIONS:
                raise ExpressionSyntaxError(f"unknown function '{value}'", self.text, pos)
            self.expect("(", f"'(' after '{value}'")
            arg = self.expr()
            self.expect(")", "')'")
            return Call(value, arg)
        if value == "(" and kind == "op":
            self.next()
            node = self.expr()
            self.expect(")", "')'")
            return node
        self.fail("expected a number, variable, function call or '('")


def parse_expression(text: str) -> Expr:
    if not isinstance(text, str) or not text.strip():
        raise ExpressionSyntaxError("empty expression", text or "", 0)
    return _Parser(text).parse()


def max_variable_index(ast: Expr) -> int:
    if isinstance(ast, Var):
        return ast.index
    if isinstance(ast, Num):
        return -1
    if isinstance(ast, Neg):
        return max_variable_index(ast.operand)
    if isinstance(ast, Call):
        return max_variable_index(ast.arg)
    return max(max_variable_index(ast.left), max_variable_index(ast.right))


def format_expression(ast: Expr) -> str:
    """Fully parenthesized rendering that re-parses to an identical AST."""
    if isinstance(ast, Num):
        return repr(ast.value)
    if isinstance(ast, Var):
        return f"x[{ast.index}]"
    if isinstance(ast, Neg):
        return f"(-{format_expression(ast.operand)})"
    if isinstance(ast, Call):
        return f"{ast.name}({format_expression(ast.arg)})"
    return f"({format_expression(ast.left)} {ast.op} {format_expression(ast.right)})"


def eval_expression(ast: Expr, x) -> float:
    """Evaluate with plain arithmetic; domain errors raise ``EvaluationError``."""
    x = np.asarray(x, dtype=float).ravel()
    need = max_variable_index(ast)
    if need >= x.size:
        raise InvalidArgumentError(
            f"expression references x[{need}] but input has {x.size} values"
        )
    return _eval(ast, x)


def _eval(ast, x) -> float:
    if isinstance(ast, Num):
        return ast.value
    if isinstance(ast, Var):
        return float(x[ast.index])
    if isinstance(ast, Neg):
        return -_eval(ast.operand, x)
    if isinstance(ast, Call):
        a = _eval(ast.arg, x)
        if ast.name in ("log", "sqrt") and (a <= 0.0 if ast.name == "log" else a < 0.0):
            raise EvaluationError(f"{ast.name} of non-positive value {a}")
        try:
            return float(FUNCTIONS[ast.name](a))
        except (OverflowError, ValueError) as exc:
            raise EvaluationError(f"{ast.name}({a}): {exc}") from None
    a = _eval(ast.left, x)
    b = _eval(ast.right, x)
    op = ast.op
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if abs(b) < DIVISION_EPS:
            raise EvaluationError(f"division by {b}")
        return a / b
    try:
        result = a ** b
    except (OverflowError, ZeroDivisionError) as exc:
        raise EvaluationError(f"{a} ^ {b}: {exc}") from None
    if isinstance(result, complex):
        raise EvaluationError(f"{a} ^ {b} is not real")
    return float(result)
