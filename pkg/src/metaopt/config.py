"""Run configuration: strict parsing, validation and object construction.

A config is a TOML document::

    seed = 7

    [space]
    kind = "search"            # search | hyper | tree
    n_agents = 20
    n_iterations = 1000
    n_variables = 2
    lower_bound = [-5.12, -5.12]
    upper_bound = [5.12, 5.12]

    [optimizer]
    name = "pso"
    [optimizer.hyperparams]
    w = 0.7

    [objective]
    kind = "expression"        # benchmark | expression | weighted
    expression = "x[0]^2 + x[1]^2"

    [output]
    directory = "out"
    format = "csv"
    plot = "best"

Unknown keys are errors. Paths resolve relative to the config file.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from metaopt.exceptions import ConfigError, InvalidArgumentError
from metaopt.math.benchmark import BENCHMARKS
from metaopt.objective import (
    BenchmarkFunction,
    ExpressionFunction,
    WeightedFunction,
)
from metaopt.optimizers import OPTIMIZERS, get_optimizer
from metaopt.spaces import HyperSpace, SearchSpace, TreeSpace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SPACE_KINDS = {
    "search": "Real-valued box; one component per variable.",
    "hyper": "Hypercomplex unit cube; each variable spans n_dimensions components in [0, 1].",
    "tree": "Expression-tree population for genetic programming.",
}

_TOP_KEYS = {"seed", "space", "optimizer", "objective", "output"}
_SPACE_KEYS = {
    "search": {"kind", "n_agents", "n_iterations", "n_variables", "lower_bound", "upper_bound"},
    "hyper": {"kind", "n_agents", "n_iterations", "n_variables", "n_dimensions",
              "lower_bound", "upper_bound"},
    "tree": {"kind", "n_agents", "n_iterations", "n_variables", "terminals", "functions",
             "min_depth", "max_depth", "constant_range", "n_samples", "sample_lower",
             "sample_upper"},
}
_OPTIMIZER_KEYS = {"name", "hyperparams"}
_OBJECTIVE_KEYS = {
    "benchmark": {"kind", "name", "negate"},
    "expression": {"kind", "expression", "negate"},
    "weighted": {"kind", "terms", "negate"},
}
_TERM_KEYS = {"benchmark", "expression", "weight"}
_OUTPUT_KEYS = {"directory", "format", "plot", "log_scale", "light"}


@dataclass
class SpaceConfig:
    kind: str = "search"
    n_agents: int = 20
    n_iterations: int = 100
    n_variables: Optional[int] = None
    lower_bound: list = field(default_factory=list)
    upper_bound: list = field(default_factory=list)
    n_dimensions: int = 4
    terminals: list = field(default_factory=lambda: ["x[0]", "const"])
    functions: list = field(default_factory=lambda: ["+", "-", "*"])
    min_depth: int = 1
    max_depth: int = 5
    constant_range: list = field(default_factory=lambda: [-1.0, 1.0])
    n_samples: int = 20
    sample_lower: list = field(default_factory=lambda: [-1.0])
    sample_upper: list = field(default_factory=lambda: [1.0])


@dataclass
class ObjectiveConfig:
    kind: str = "benchmark"
    name: Optional[str] = None
    expression: Optional[str] = None
    terms: list = field(default_factory=list)
    negate: bool = False


@dataclass
class OutputConfig:
    directory: Optional[str] = None
    format: str = "csv"
    plot: Optional[str] = None
    log_scale: bool = False
    light: bool = False


@dataclass
class RunConfig:
    """Everything a run depends on; ``run`` is a pure function of this value."""

    optimizer: str
    space: SpaceConfig
    objective: ObjectiveConfig
    hyperparams: dict = field(default_factory=dict)
    seed: int = 0
    light: bool = False
    output: OutputConfig = field(default_factory=OutputConfig)

    def validate(self) -> "RunConfig":
        build(self)
        return self


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _wrap(key):
    """Turn library argument errors into config errors tagged with ``key``."""

    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc_type is not None and issubclass(exc_type, InvalidArgumentError):
                raise ConfigError(str(exc), key=key) from exc
            return False

    return _Ctx()


def n_variables_of(cfg: RunConfig) -> int:
    sp = cfg.space
    if sp.n_variables is not None:
        return int(sp.n_variables)
    if sp.kind == "tree":
        return len(sp.sample_lower)
    return len(sp.lower_bound)


def build_objective(cfg: RunConfig):
    ob = cfg.objective
    n = n_variables_of(cfg)
    with _wrap("objective"):
        if ob.kind == "benchmark":
            if ob.name is None:
                raise ConfigError("benchmark objective needs 'name'", key="objective.name")
            return BenchmarkFunction(ob.name, n, negate=ob.negate)
        if ob.kind == "expression":
            if ob.expression is None:
                raise ConfigError("expression objective needs 'expression'",
                                  key="objective.expression")
            return ExpressionFunction(ob.expression, n, negate=ob.negate)
        if ob.kind == "weighted":
            functions, weights = [], []
            for term in ob.terms:
                if ("benchmark" in term) == ("expression" in term):
                    raise ConfigError("each term needs exactly one of 'benchmark' or "
                                      "'expression'", key="objective.terms")
                if "weight" not in term:
                    raise ConfigError("each term needs a 'weight'", key="objective.terms")
                if "benchmark" in term:
                    functions.append(BenchmarkFunction(term["benchmark"], n))
                else:
                    functions.append(ExpressionFunction(term["expression"], n))
                weights.append(term["weight"])
            return WeightedFunction(functions, weights, negate=ob.negate)
    raise ConfigError(f"unknown objective kind '{ob.kind}' "
                      "(choose from benchmark, expression, weighted)", key="objective.kind")


def build_space(cfg: RunConfig):
    sp = cfg.space
    n = n_variables_of(cfg)
    with _wrap("space"):
        if sp.kind == "search":
            return SearchSpace(sp.n_agents, n, sp.n_iterations, sp.lower_bound, sp.upper_bound)
        if sp.kind == "hyper":
            return HyperSpace(sp.n_agents, n, sp.n_dimensions, sp.n_iterations,
                              sp.lower_bound, sp.upper_bound)
        if sp.kind == "tree":
            space = TreeSpace(sp.n_agents, sp.terminals, sp.functions, sp.min_depth,
                              sp.max_depth, sp.n_iterations, sp.constant_range)
            if space.n_variables > n:
                raise ConfigError(f"terminals reference {space.n_variables} variables but "
                                  f"samples define {n}", key="space.terminals")
            if len(sp.sample_lower) != n or len(sp.sample_upper) != n:
                raise ConfigError(f"sample bounds must have {n} entries",
                                  key="space.sample_lower")
            if int(sp.n_samples) < 1:
                raise ConfigError("n_samples must be positive", key="space.n_samples")
            return space
    raise ConfigError(f"unknown space kind '{sp.kind}' (choose from search, hyper, tree)",
                      key="space.kind")


def sample_points(cfg: RunConfig, stream) -> np.ndarray:
    """Regression inputs for tree spaces: a grid for one variable, uniform draws otherwise."""
    sp = cfg.space
    lo = np.asarray(sp.sample_lower, dtype=float)
    hi = np.asarray(sp.sample_upper, dtype=float)
    k = int(sp.n_samples)
    if lo.size == 1:
        return np.linspace(lo[0], hi[0], k)[:, None]
    return stream.uniform(lo, hi, (k, lo.size))


def build(cfg: RunConfig):
    """Construct ``(objective, space, optimizer)`` after cross-checking the config."""
    if cfg.optimizer not in OPTIMIZERS:
        raise ConfigError(f"unknown optimizer '{cfg.optimizer}' "
                          f"(choose from {', '.join(OPTIMIZERS)})", key="optimizer.name")
    if not isinstance(cfg.seed, int) or not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed must be an integer in [0, 2^64)", key="seed")
    with _wrap("optimizer.hyperparams"):
        optimizer = get_optimizer(cfg.optimizer, cfg.hyperparams)
    space = build_space(cfg)
    if space.kind not in optimizer.space_kinds:
        raise ConfigError(
            f"optimizer '{cfg.optimizer}' requires a {' or '.join(optimizer.space_kinds)} "
            f"space but the config declares '{space.kind}'", key="space.kind")
    objective = build_objective(cfg)
    return objective, space, optimizer


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _find_line(text, dotted):
    """Best-effort 1-based line of ``dotted`` key in TOML ``text``."""
    if not text:
        return None
    *sections, key = dotted.split(".")
    header = re.compile(r"^\s*\[+\s*([^\]]+?)\s*\]+")
    assign = re.compile(rf"^\s*{re.escape(key)}\s*=")
    current = ""
    want = ".".join(sections)
    fallback = None
    for no, line in enumerate(text.splitlines(), 1):
        m = header.match(line)
        if m:
            current = m.group(1)
            if current == dotted:
                return no
            continue
        if assign.match(line):
            if current == want:
                return no
            fallback = fallback or no
    return fallback


def _strict(table, allowed, prefix, text):
    if not isinstance(table, dict):
        raise ConfigError(f"'{prefix}' must be a table", key=prefix, line=_find_line(text, prefix))
    for key in table:
        if key not in allowed:
            dotted = f"{prefix}.{key}" if prefix else key
            raise ConfigError(
                f"unknown key '{key}' (allowed: {', '.join(sorted(allowed))})",
                key=dotted, line=_find_line(text, dotted))


def _typed(value, kind, key, text):
    ok = {
        "int": lambda v: isinstance(v, int) and not isinstance(v, bool),
        "num": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
        "str": lambda v: isinstance(v, str),
        "bool": lambda v: isinstance(v, bool),
        "numlist": lambda v: isinstance(v, list) and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v),
        "strlist": lambda v: isinstance(v, list) and all(isinstance(x, str) for x in v),
    }[kind]
    if not ok(value):
        raise ConfigError(f"expected {kind} value, got {value!r}", key=key,
                          line=_find_line(text, key))
    return value


_SPACE_TYPES = {
    "kind": "str", "n_agents": "int", "n_iterations": "int", "n_variables": "int",
    "n_dimensions": "int", "terminals": "strlist", "functions": "strlist",
    "min_depth": "int", "max_depth": "int", "constant_range": "numlist",
    "n_samples": "int",
}


def _bound_list(value, n, key, text):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if n is None:
            raise ConfigError("scalar bounds need n_variables", key=key,
                              line=_find_line(text, key))
        return [float(value)] * n
    return [float(v) for v in _typed(value, "numlist", key, text)]


def from_dict(data: dict, text: str = None, base_dir=None) -> RunConfig:
    """Build a validated :class:`RunConfig` from parsed TOML ``data``."""
    _strict(data, _TOP_KEYS, "", text)
    for required in ("space", "optimizer", "objective"):
        if required not in data:
            raise ConfigError(f"missing [{required}] section", key=required)

    raw_space = data["space"]
    _strict(raw_space, set().union(*_SPACE_KEYS.values()), "space", text)
    kind = _typed(raw_space.get("kind", "search"), "str", "space.kind", text)
    if kind not in _SPACE_KEYS:
        raise ConfigError(f"unknown space kind '{kind}' (choose from search, hyper, tree)",
                          key="space.kind", line=_find_line(text, "space.kind"))
    _strict(raw_space, _SPACE_KEYS[kind], "space", text)
    space = SpaceConfig(kind=kind)
    for key, value in raw_space.items():
        dotted = f"space.{key}"
        if key in ("lower_bound", "upper_bound", "sample_lower", "sample_upper"):
            value = _bound_list(value, raw_space.get("n_variables"), dotted, text)
        else:
            value = _typed(value, _SPACE_TYPES[key], dotted, text)
        setattr(space, key, value)

    raw_opt = data["optimizer"]
    _strict(raw_opt, _OPTIMIZER_KEYS, "optimizer", text)
    if "name" not in raw_opt:
        raise ConfigError("missing optimizer name", key="optimizer.name")
    name = _typed(raw_opt["name"], "str", "optimizer.name", text)
    hyper = raw_opt.get("hyperparams", {})
    if not isinstance(hyper, dict):
        raise ConfigError("hyperparams must be a table", key="optimizer.hyperparams",
                          line=_find_line(text, "optimizer.hyperparams"))
    if name in OPTIMIZERS:
        _strict(hyper, set(OPTIMIZERS[name].defaults), "optimizer.hyperparams", text)

    raw_obj = data["objective"]
    _strict(raw_obj, set().union(*_OBJECTIVE_KEYS.values()), "objective", text)
    okind = _typed(raw_obj.get("kind", "benchmark"), "str", "objective.kind", text)
    if okind not in _OBJECTIVE_KEYS:
        raise ConfigError(f"unknown objective kind '{okind}' "
                          "(choose from benchmark, expression, weighted)",
                          key="objective.kind", line=_find_line(text, "objective.kind"))
    _strict(raw_obj, _OBJECTIVE_KEYS[okind], "objective", text)
    objective = ObjectiveConfig(kind=okind)
    if "name" in raw_obj:
        objective.name = _typed(raw_obj["name"], "str", "objective.name", text)
        if objective.name not in BENCHMARKS:
            raise ConfigError(f"unknown benchmark '{objective.name}' "
                              f"(choose from {', '.join(BENCHMARKS)})",
                              key="objective.name", line=_find_line(text, "objective.name"))
    if "expression" in raw_obj:
        objective.expression = _typed(raw_obj["expression"], "str", "objective.expression", text)
    if "negate" in raw_obj:
        objective.negate = _typed(raw_obj["negate"], "bool", "objective.negate", text)
    if "terms" in raw_obj:
        terms = raw_obj["terms"]
        if not isinstance(terms, list) or not terms:
            raise ConfigError("terms must be a non-empty array of tables",
                              key="objective.terms", line=_find_line(text, "objective.terms"))
        for term in terms:
            _strict(term, _TERM_KEYS, "objective.terms", text)
            if "weight" in term:
                _typed(term["weight"], "num", "objective.terms.weight", text)
        objective.terms = [dict(t) for t in terms]

    output = OutputConfig()
    raw_out = data.get("output", {})
    _strict(raw_out, _OUTPUT_KEYS, "output", text)
    for key, value in raw_out.items():
        dotted = f"output.{key}"
        kind_of = {"directory": "str", "format": "str", "plot": "str",
                   "log_scale": "bool", "light": "bool"}[key]
        setattr(output, key, _typed(value, kind_of, dotted, text))
    if output.format not in ("csv", "json"):
        raise ConfigError("format must be 'csv' or 'json'", key="output.format",
                          line=_find_line(text, "output.format"))
    if output.plot is not None:
        check_plot_target(output.plot)
        if output.light and output.plot != "best":
            raise ConfigError("variable plots need full history; set light = false",
                              key="output.plot", line=_find_line(text, "output.plot"))
    if output.directory is not None and base_dir is not None:
        output.directory = str((Path(base_dir) / output.directory).resolve())

    seed = data.get("seed", 0)
    _typed(seed, "int", "seed", text)

    cfg = RunConfig(optimizer=name, space=space, objective=objective, hyperparams=dict(hyper),
                    seed=seed, light=output.light, output=output)
    try:
        cfg.validate()
    except ConfigError as exc:
        if exc.line is None and exc.key is not None:
            exc.line = _find_line(text, exc.key)
        raise
    return cfg


def check_plot_target(plot: str) -> str:
    if plot == "best" or re.fullmatch(r"var:\d+", plot):
        return plot
    raise ConfigError(f"plot target must be 'best' or 'var:<k>', got '{plot}'", key="output.plot")


def loads(text: str, base_dir=None) -> RunConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"malformed config: {exc}", line=int(m.group(1)) if m else None) from None
    return from_dict(data, text=text, base_dir=base_dir)


def load(path) -> RunConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return loads(text, base_dir=path.parent)
