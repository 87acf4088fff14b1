"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 evaluation
error during a run.
"""

from __future__ import annotations

import argparse
import copy
import json
import logging
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from metaopt import config as _config
from metaopt import kernels
from metaopt.engine import convergence_svg, history_export, run
from metaopt.exceptions import ConfigError, EvaluationError
from metaopt.math.benchmark import BENCHMARKS
from metaopt.optimizers import OPTIMIZERS

logger = logging.getLogger("metaopt")

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_EVAL = 0, 1, 2, 3
OUTPUT_ENV = "METAOPT_OUTPUT_DIR"
DEFAULT_OUTPUT = "metaopt-out"


def _seed_range(text):
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise argparse.ArgumentTypeError(f"expected 'a..b' with a <= b, got '{text}'")
    return list(range(int(m.group(1)), int(m.group(2)) + 1))


def _plot_target(text):
    try:
        return _config.check_plot_target(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metaopt", description="Run nature-inspired meta-heuristic optimizations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an optimization from a config file")
    p_run.add_argument("--config", required=True, type=Path, help="TOML run configuration")
    seeds = p_run.add_mutually_exclusive_group()
    seeds.add_argument("--seed", type=int, help="override the config seed")
    seeds.add_argument("--seeds", type=_seed_range, metavar="A..B",
                       help="sweep an inclusive seed range; one output directory per seed")
    p_run.add_argument("--jobs", type=int, default=1, help="parallel runs for --seeds")
    p_run.add_argument("--output-dir", type=Path,
                       help=f"output directory (default: config, then ${OUTPUT_ENV}, "
                            f"then ./{DEFAULT_OUTPUT})")
    p_run.add_argument("--format", choices=("csv", "json"), help="history format")
    p_run.add_argument("--plot", type=_plot_target, metavar="best|var:k",
                       help="write a convergence SVG")
    p_run.add_argument("--log-scale", action="store_true", help="log-10 y axis for the plot")
    p_run.add_argument("--light", action="store_true",
                       help="record only the best trajectory, not every agent")
    p_run.add_argument("--log-level", default="INFO",
                       choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    p_run.add_argument("--log-file", type=Path, help="also write progress lines to this file")

    p_list = sub.add_parser("list", help="list optimizers, benchmarks or spaces")
    p_list.add_argument("category", help="optimizers | benchmarks | spaces")

    p_val = sub.add_parser("validate", help="validate a config without running it")
    p_val.add_argument("--config", required=True, type=Path)
    return parser


def _setup_logging(level, log_file=None):
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file is not None:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(level=getattr(logging, level),
                        format="level=%(levelname)s logger=%(name)s %(message)s",
                        handlers=handlers, force=True)


def _error(message):
    print(f"error: {message}", file=sys.stderr)


def _load(path):
    try:
        return _config.load(path)
    except OSError as exc:
        _error(f"cannot read config: {exc}")
        return EXIT_IO
    except ConfigError as exc:
        _error(f"{path}: {exc}")
        return EXIT_CONFIG


def cmd_list(category) -> int:
    if category == "optimizers":
        for name, cls in OPTIMIZERS.items():
            params = ", ".join(f"{k}={v}" for k, v in cls.defaults.items()) or "no hyperparameters"
            print(f"{name}\t{cls.description}\t[{params}]")
    elif category == "benchmarks":
        for name, (desc, x_star) in BENCHMARKS.items():
            print(f"{name}\t{desc}\t[minimum at x_i = {x_star}]")
    elif category == "spaces":
        for name, desc in _config.SPACE_KINDS.items():
            print(f"{name}\t{desc}")
    else:
        _error(f"unknown category '{category}' (choose from optimizers, benchmarks, spaces)")
        return EXIT_CONFIG
    return EXIT_OK


def cmd_validate(path) -> int:
    cfg = _load(path)
    if isinstance(cfg, int):
        return cfg
    print("OK")
    return EXIT_OK


def _run_one(cfg, outdir: Path, fmt, plot, log_scale, seed_source, config_seed) -> int:
    started = time.perf_counter()
    try:
        result = run(cfg)
    except EvaluationError as exc:
        _error(f"evaluation failed: {exc}")
        return EXIT_EVAL
    elapsed = time.perf_counter() - started

    best = result.best_position
    summary = {
        "best_position": best if isinstance(best, str) else [float(v) for v in best],
        "best_fitness": float(result.best_fitness),
        "iterations": len(result.history),
        "seed": cfg.seed,
        "seed_source": seed_source,
        "optimizer": cfg.optimizer,
        "backend": kernels.BACKEND,
        "elapsed_seconds": round(elapsed, 6),
    }
    if seed_source == "cli" and config_seed is not None and config_seed != cfg.seed:
        summary["config_seed"] = config_seed
        summary["note"] = "--seed flag overrides the seed in the config file"
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        history_export(result.history, fmt, outdir / f"history.{fmt}")
        (outdir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n",
                                             encoding="utf-8")
        if plot is not None:
            target = "best_fitness" if plot == "best" else plot
            convergence_svg(result.history, target, outdir / "convergence.svg", log_scale)
    except OSError as exc:
        _error(f"cannot write outputs: {exc}")
        return EXIT_IO
    except ValueError as exc:
        _error(str(exc))
        return EXIT_CONFIG
    logger.info("wrote outputs to %s (best_fitness=%s)", outdir, format(result.best_fitness, ".17g"))
    return EXIT_OK


def _sweep_worker(args):
    cfg, outdir, fmt, plot, log_scale, level = args
    _setup_logging(level)
    return _run_one(cfg, outdir, fmt, plot, log_scale, "sweep", None)


def cmd_run(args) -> int:
    cfg = _load(args.config)
    if isinstance(cfg, int):
        return cfg
    out = cfg.output
    fmt = args.format or out.format
    plot = args.plot or out.plot
    log_scale = args.log_scale or out.log_scale
    if args.light:
        cfg.light = True
    if plot is not None and plot != "best" and cfg.light:
        _error("variable plots need full history; drop --light or plot 'best'")
        return EXIT_CONFIG

    if args.output_dir is not None:
        outdir = args.output_dir
    elif out.directory is not None:
        outdir = Path(out.directory)
    else:
        outdir = Path(os.environ.get(OUTPUT_ENV, DEFAULT_OUTPUT))

    if args.seeds:
        jobs = []
        for seed in args.seeds:
            c = copy.deepcopy(cfg)
            c.seed = seed
            jobs.append((c, outdir / f"seed_{seed}", fmt, plot, log_scale, args.log_level))
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                codes = list(pool.map(_sweep_worker, jobs))
        else:
            codes = [_run_one(c, d, f, p, ls, "sweep", None) for c, d, f, p, ls, _ in jobs]
        return max(codes)

    config_seed = cfg.seed
    seed_source = "config"
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            _error("seed must be in [0, 2^64)")
            return EXIT_CONFIG
        cfg.seed = args.seed
        seed_source = "cli"
    return _run_one(cfg, outdir, fmt, plot, log_scale, seed_source, config_seed)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        return cmd_list(args.category)
    if args.command == "validate":
        return cmd_validate(args.config)
    _setup_logging(args.log_level, args.log_file)
    return cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
