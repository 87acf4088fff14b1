"""Run loop, history recording and artifact emission."""

from __future__ import annotations

import csv
import json
import logging
import math
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from metaopt import config as _config
from metaopt.exceptions import EvaluationError, InvalidArgumentError
from metaopt.math.random import RandomStream

logger = logging.getLogger(__name__)

SPAN_DIMENSION = -1  # CSV `dimension` value marking a spanned hypercomplex value


def _num(x) -> str:
    return format(float(x), ".17g")


@dataclass
class IterationRecord:
    iteration: int
    best_fitness: float
    best_position: object  # real vector, or expression string for trees
    fitness: Optional[np.ndarray] = None
    positions: Optional[object] = None  # (m, n) real values, or list of expressions
    raw: Optional[np.ndarray] = None  # (m, n, d) hypercomplex components
    wall_time: float = 0.0


@dataclass
class History:
    space_kind: str = "search"
    records: List[IterationRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def append(self, record: IterationRecord):
        self.records.append(record)

    @property
    def best_fitness(self) -> np.ndarray:
        return np.array([r.best_fitness for r in self.records])

    @property
    def light(self) -> bool:
        return bool(self.records) and self.records[0].fitness is None

    def variable_series(self, k: int) -> np.ndarray:
        """Per-agent trajectories of variable ``k``, shape ``(T, m)``."""
        if self.space_kind == "tree":
            raise InvalidArgumentError("tree histories record expressions, not variables")
        if self.light:
            raise InvalidArgumentError("history was recorded in light mode; positions absent")
        series = np.array([r.positions[:, k] for r in self.records])
        return series


@dataclass
class RunResult:
    best_position: object
    best_fitness: float
    history: History


def _record(space, t, elapsed, light) -> IterationRecord:
    if space.kind == "tree":
        best = space.best_tree.to_expression()
        if light:
            return IterationRecord(t, space.best_fitness, best, wall_time=elapsed)
        return IterationRecord(t, space.best_fitness, best, space.fitness.copy(),
                               [tree.to_expression() for tree in space.trees],
                               wall_time=elapsed)
    best = space.best_real().copy()
    if light:
        return IterationRecord(t, space.best_fitness, best, wall_time=elapsed)
    raw = space.positions.copy() if space.kind == "hyper" else None
    return IterationRecord(t, space.best_fitness, best, space.fitness.copy(),
                           space.materialize().copy(), raw, elapsed)


def run(cfg) -> RunResult:
    """Execute one optimization described by ``cfg`` (a :class:`RunConfig`)."""
    objective, space, optimizer = _config.build(cfg)
    stream = RandomStream(cfg.seed)
    T = space.n_iterations

    try:
        if space.kind == "tree":
            X = _config.sample_points(cfg, stream)
            space.set_samples(X, objective.evaluate_batch(X))
        space.initialize(stream)
        space.evaluate_all(objective)
    except EvaluationError as exc:
        exc.iteration = 0
        raise EvaluationError(f"iteration 0: {exc}", exc.x, 0) from exc
    space.update_best()
    state = optimizer.init_state(space, objective, stream)

    history = History(space_kind=space.kind)
    checkpoint = max(1, T // 10)
    for t in range(1, T + 1):
        start = time.perf_counter()
        try:
            optimizer.step(space, objective, state, stream, t, T)
        except EvaluationError as exc:
            raise EvaluationError(f"iteration {t}: {exc}", exc.x, t) from exc
        space.clip()
        space.update_best()
        elapsed = time.perf_counter() - start
        history.append(_record(space, t, elapsed, cfg.light))
        level = logging.INFO if t % checkpoint == 0 or t == T else logging.DEBUG
        logger.log(level, "iteration=%d best_fitness=%s", t, _num(space.best_fitness))

    last = history.records[-1]
    return RunResult(last.best_position, last.best_fitness, history)


# ---------------------------------------------------------------------------
# Export / import
# ---------------------------------------------------------------------------

POSITION_FIELDS = ["iteration", "agent_id", "variable", "dimension", "position", "fitness"]


def _position_rows(history: History):
    for r in history.records:
        if r.fitness is None:
            continue
        if history.space_kind == "tree":
            for a, expr in enumerate(r.positions):
                yield [r.iteration, a, 0, 0, expr, _num(r.fitness[a])]
            continue
        m, n = r.positions.shape
        for a in range(m):
            fit = _num(r.fitness[a])
            for i in range(n):
                if r.raw is not None:
                    for j in range(r.raw.shape[2]):
                        yield [r.iteration, a, i, j, _num(r.raw[a, i, j]), fit]
                    yield [r.iteration, a, i, SPAN_DIMENSION, _num(r.positions[a, i]), fit]
                else:
                    yield [r.iteration, a, i, 0, _num(r.positions[a, i]), fit]


def _best_fields(history: History):
    if history.space_kind == "tree":
        return ["iteration", "best_fitness", "best_position"]
    n = len(history.records[0].best_position) if history.records else 0
    return ["iteration", "best_fitness"] + [f"best_position_{i}" for i in range(n)]


def _best_rows(history: History):
    for r in history.records:
        if history.space_kind == "tree":
            yield [r.iteration, _num(r.best_fitness), r.best_position]
        else:
            yield [r.iteration, _num(r.best_fitness)] + [_num(v) for v in r.best_position]


def best_path_for(path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_best{path.suffix}")


def history_export(history: History, fmt: str, path) -> List[Path]:
    """Write ``history`` as CSV (plus a ``*_best.csv`` companion) or one JSON file.

    Returns the written paths.
    """
    path = Path(path)
    if fmt == "csv":
        best_path = best_path_for(path)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(POSITION_FIELDS)
            writer.writerows(_position_rows(history))
        with open(best_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_best_fields(history))
            writer.writerows(_best_rows(history))
        return [path, best_path]
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write('{\n"space_kind": %s,\n' % json.dumps(history.space_kind))
            _write_json_rows(fh, "positions", POSITION_FIELDS, _position_rows(history))
            fh.write(",\n")
            _write_json_rows(fh, "best", _best_fields(history), _best_rows(history))
            fh.write("\n}\n")
        return [path]
    raise InvalidArgumentError(f"unknown export format '{fmt}' (csv or json)")


def _json_value(v):
    # pre-formatted numbers are emitted verbatim to keep 17 significant digits
    if isinstance(v, str):
        try:
            float(v)
        except ValueError:
            return json.dumps(v)
        return v if math.isfinite(float(v)) else json.dumps(v)
    return json.dumps(v)


def _write_json_rows(fh, name, fields, rows):
    fh.write(f'"{name}": [')
    first = True
    for row in rows:
        fh.write("\n" if first else ",\n")
        first = False
        pairs = ", ".join(f'"{k}": {_json_value(v)}' for k, v in zip(fields, row))
        fh.write("{" + pairs + "}")
    fh.write("\n]" if not first else "]")


def history_import(path) -> History:
    """Read back a history written by :func:`history_export`."""
    path = Path(path)
    if path.suffix == ".json":
        data = json.loads(path.read_text(encoding="utf-8"))
        kind = data["space_kind"]
        pos_rows = [[row[k] for k in POSITION_FIELDS] for row in data["positions"]]
        best_rows = [list(row.values()) for row in data["best"]]
    else:
        with open(path, newline="", encoding="utf-8") as fh:
            pos_rows = list(csv.reader(fh))[1:]
        with open(best_path_for(path), newline="", encoding="utf-8") as fh:
            best_rows = list(csv.reader(fh))[1:]
        kind = "search"
        if any(str(r[3]) == str(SPAN_DIMENSION) for r in pos_rows):
            kind = "hyper"
        elif best_rows and len(best_rows[0]) == 3 and not _is_number(best_rows[0][2]):
            kind = "tree"

    history = History(space_kind=kind)
    for row in best_rows:
        it, fit, *pos = row
        best = pos[0] if kind == "tree" else np.array([float(v) for v in pos])
        history.append(IterationRecord(int(it), float(fit), best))

    by_iter = {}
    for it, agent, var, dim, value, fit in pos_rows:
        by_iter.setdefault(int(it), []).append((int(agent), int(var), int(dim), value, float(fit)))
    for r in history.records:
        rows = by_iter.get(r.iteration)
        if not rows:
            continue
        m = max(a for a, *_ in rows) + 1
        r.fitness = np.zeros(m)
        if kind == "tree":
            r.positions = [None] * m
            for a, _, _, value, fit in rows:
                r.positions[a] = value
                r.fitness[a] = fit
            continue
        n = max(v for _, v, *_ in rows) + 1
        r.positions = np.zeros((m, n))
        if kind == "hyper":
            d = max(dm for _, _, dm, *_ in rows) + 1
            r.raw = np.zeros((m, n, d))
        for a, v, dm, value, fit in rows:
            r.fitness[a] = fit
            if dm == SPAN_DIMENSION or kind == "search":
                r.positions[a, v] = float(value)
            else:
                r.raw[a, v, dm] = float(value)
    return history


def _is_number(s):
    try:
        float(s)
    except (TypeError, ValueError):
        return False
    return True


# ---------------------------------------------------------------------------
# Convergence SVG
# ---------------------------------------------------------------------------

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def _symlog(y):
    return np.sign(y) * np.log10(1.0 + np.abs(y))


def _ticks(lo, hi, count=5):
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def convergence_svg(history: History, target="best_fitness", path=None, log_scale=False,
                    width=640, height=400) -> str:
    """Render a convergence line chart as standalone SVG 1.1.

    ``target`` is ``"best_fitness"`` (alias ``"best"``), ``"var:<k>"`` or an
    integer variable index. Returns the SVG text and writes it to ``path`` if given.
    """
    if len(history) == 0:
        raise InvalidArgumentError("cannot plot an empty history")
    if target in ("best", "best_fitness"):
        series = history.best_fitness[:, None]
        ylabel = "best fitness"
    else:
        k = int(str(target).split(":")[-1])
        series = history.variable_series(k)
        ylabel = f"x[{k}]"
    series = np.asarray(series, dtype=float)

    scale = "linear"
    if log_scale:
        if np.all(series > 0):
            series = np.log10(series)
            scale = "log10"
        else:
            warnings.warn("non-positive values on a log axis; using symmetric log instead",
                          RuntimeWarning, stacklevel=2)
            series = _symlog(series)
            scale = "symlog"
    ylabel = ylabel if scale == "linear" else f"{scale}({ylabel})"

    iterations = np.array([r.iteration for r in history.records], dtype=float)
    y_lo, y_hi = float(np.min(series)), float(np.max(series))
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    x_lo, x_hi = float(iterations[0]), float(iterations[-1])
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0

    left, right, top, bottom = 80, 20, 20, 50
    pw, ph = width - left - right, height - top - bottom

    def sx(v):
        return left + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return top + (y_hi - v) / (y_hi - y_lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<g stroke="black" stroke-width="1">'
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}"/>'
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}"/></g>',
        '<g font-family="sans-serif" font-size="11" fill="black">',
    ]
    for v in _ticks(x_lo, x_hi):
        out.append(f'<text x="{sx(v):.2f}" y="{top + ph + 16}" text-anchor="middle">{v:.6g}</text>')
    for v in _ticks(y_lo, y_hi):
        out.append(f'<text x="{left - 6}" y="{sy(v) + 4:.2f}" text-anchor="end">{v:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 8}" text-anchor="middle" '
               f'font-size="13">iteration</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.2f}" text-anchor="middle" font-size="13" '
               f'transform="rotate(-90 16 {top + ph / 2:.2f})">{ylabel}</text>')
    out.append("</g>")
    for a in range(series.shape[1]):
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(iterations, series[:, a]))
        color = _PALETTE[a % len(_PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(svg, encoding="utf-8")
    return svg
