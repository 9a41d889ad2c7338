"""Command-line driver.

Exit status: 0 when every check passes, 1 when any check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .experiments import EXPERIMENTS, SUITES, run_suite
from .reporting import ConfigError, ExperimentConfig, config_from_dict, load_config, report_json, write_report

U64 = (1 << 64) - 1


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from e
    if not 0 <= v <= U64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON experiment config")
    p.add_argument("--seed", type=_seed, help="unsigned 64-bit seed")
    p.add_argument("--out", metavar="PATH", help="CSV output path (stdout if omitted)")
    p.add_argument("--json", action="store_true", help="also write a JSON mirror next to --out")
    p.add_argument("--r-min", type=float)
    p.add_argument("--r-max", type=float)
    p.add_argument("--r-count", type=_positive_int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--r-log", dest="r_log", action="store_true", default=None, help="log-spaced r grid")
    g.add_argument("--r-linear", dest="r_log", action="store_false", help="linearly spaced r grid")
    p.add_argument("--samples", type=_positive_int, help="Monte-Carlo sample count")
    p.add_argument("--epsilon", type=float, action="append", help="repeatable")
    p.add_argument("--threads", type=_positive_int, help="worker threads (speed only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="valdist", description="Value-distribution experiments on rational curves.")
    parser.add_argument("--version", action="version", version=f"valdist {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        _common(sub.add_parser(name))
    sp = sub.add_parser("suite", help="run a named pass/fail suite")
    sp.add_argument("name", choices=sorted(SUITES))
    _common(sp)
    return parser


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else config_from_dict({})
    cfg.experiment = args.command if args.command != "suite" else f"suite:{args.name}"
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.r_min is not None:
        cfg.r_grid.r_min = args.r_min
    if args.r_max is not None:
        cfg.r_grid.r_max = args.r_max
    if args.r_count is not None:
        cfg.r_grid.count = args.r_count
    if args.r_log is not None:
        cfg.r_grid.log = args.r_log
    if args.samples is not None:
        cfg.samples = args.samples
    if args.epsilon:
        cfg.epsilons = list(args.epsilon)
    if args.threads is not None:
        cfg.threads = args.threads
    cfg.r_grid.values()
    if any(not 0 < e for e in cfg.epsilons):
        raise ConfigError("epsilon must be positive")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        cfg = make_config(args)
        if args.command == "suite":
            rep = run_suite(args.name, cfg)
        else:
            rep = EXPERIMENTS[args.command](cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    text = write_report(rep, cfg.out, args.json)
    if not cfg.out:
        sys.stdout.write(report_json(rep) + "\n" if args.json else text)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name} {c.detail}", file=sys.stderr)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
