"""``superkit`` command line: run verification suites or model files."""

from __future__ import annotations

import argparse
import os
import sys

from .dsl import ParseError
from .interp import SemanticError
from .report import Report, render_report, run_model_file, run_suite
from .suites import Options, suite_checks, suite_names

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superkit", description=__doc__)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--suite", metavar="NAME", help=f"built-in suite: {', '.join(suite_names())}")
    src.add_argument("--model", metavar="FILE", help="model file whose embedded checks are run")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for randomized property checks (default: $SUPERKIT_SEED or 0)")
    p.add_argument("--list", action="store_true", help="list suites, or the checks of --suite")
    p.add_argument("--perturb", action="store_true",
                   help="count negative-control fixtures as ordinary checks (forces failures)")
    p.add_argument("--deterministic", action="store_true",
                   help="report ms = 0 so output is byte-identical across runs")
    return p


def _seed(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("SUPERKIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"superkit: SUPERKIT_SEED must be an integer, got {env!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = Options(seed=_seed(args.seed), perturb=args.perturb)
    out = sys.stdout.buffer

    if args.list:
        if args.suite:
            try:
                checks = suite_checks(args.suite, opts)
            except KeyError as exc:
                print(f"superkit: {exc.args[0]}", file=sys.stderr)
                return 2
            for c in checks:
                tag = "  (negative control)" if c.negative else ""
                out.write(f"{c.id}  [{c.anchor}]{tag}\n".encode())
        else:
            for name in suite_names():
                out.write(f"{name}\n".encode())
        out.flush()
        return 0

    try:
        if args.model:
            report = run_model_file(args.model)
        else:
            report = run_suite(args.suite or "all", opts)
    except KeyError as exc:
        print(f"superkit: {exc.args[0]}", file=sys.stderr)
        return 2
    except (ParseError, SemanticError) as exc:
        kind = "syntax error" if isinstance(exc, ParseError) else "semantic error"
        print(f"superkit: {args.model}: {kind}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"superkit: cannot read model file: {exc}", file=sys.stderr)
        return 2

    out.write(render_report(report, args.format, timings=not args.deterministic))
    out.flush()
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
