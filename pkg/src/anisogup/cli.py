"""Command-line batch verifier.

Exit status: 0 when every check holds or is solved, 1 when any check fails
or has no solution, 2 for usage, input or unsupported-ansatz errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Callable, Sequence

from . import __version__
from .criteria import (
    check_commutativity,
    check_reordering,
    check_summary_models,
    check_symmetricity,
    check_xx_invariance,
    solve_transform,
)
from .library import get, names
from .model import EXACT, Mode
from .model_io import FORMATS, ReportDocument, load_model, render_report
from .numeric_oracle import oracle_checks
from .tensor_core import TensorError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would print and exit itself
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _placement(text: str):
    if text in ("swap", "left", "canonical", "right"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid placement {text!r}") from None


def _mode(text: str) -> Mode:
    try:
        return Mode.parse(text)
    except TensorError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--model", metavar="FILE", help="model description file")
    src.add_argument("--builtin", metavar="NAME", help="built-in model name")
    modes = common.add_mutually_exclusive_group()
    modes.add_argument("--order", type=_mode, metavar="K", help="truncation order, or 'mixed'")
    modes.add_argument("--exact", action="store_true", help="decide exactly (default)")
    common.add_argument("--ansatz", metavar="SPEC", help="ansatz name declared by the model")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--dim", type=int, metavar="N", help="override the spatial dimension")
    common.add_argument("--trials", type=int, default=3, help="oracle test functions")
    common.add_argument("--placement", type=_placement, default="swap",
                        help="swap, canonical or an integer depth")
    common.add_argument("--kind", choices=("reorder", "xx"), default="reorder",
                        help="criterion solved by 'solve'")

    parser = _Parser(prog="anisogup", description="Verifier for anisotropic deformed position operators.")
    parser.add_argument("--version", action="version", version=f"anisogup {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name, text in (
        ("check-xx", "invariance of [x_i, x_j] under C"),
        ("check-reorder", "unobservability of q/p ordering"),
        ("check-symmetric", "symmetric position operator"),
        ("check-commutative", "commuting position operators"),
        ("solve", "solve an ansatz for a compensating C"),
        ("summary", "regression of the overlapping-feature identities"),
        ("oracle", "numeric cross-check of commutators"),
        ("list-models", "list built-in models"),
    ):
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _model(args):
    if args.model:
        try:
            model = load_model(args.model)
        except OSError as exc:
            raise UsageError(f"cannot read {args.model}: {exc.strerror}") from None
    elif args.builtin:
        model = get(args.builtin)
    else:
        raise UsageError("one of --model FILE or --builtin NAME is required")
    if args.dim is not None:
        if args.dim < 1:
            raise UsageError("--dim must be positive")
        model.dim = args.dim
    return model


def _run(args) -> ReportDocument:
    mode = args.order if args.order is not None else EXACT
    if args.command == "summary":
        doc = ReportDocument("library")
        t = time.perf_counter()
        reports = check_summary_models()
        per = (time.perf_counter() - t) / max(len(reports), 1)
        for r in reports:
            doc.add(r, per)
        return doc
    model = _model(args)
    doc = ReportDocument(model.name)
    jobs: list[Callable] = []
    # criteria default to the model's first declared ansatz, else C = 1
    default = args.ansatz if args.ansatz or not model.ansatze else model.ansatz().name
    if args.command == "check-xx":
        jobs.append(lambda: check_xx_invariance(model, default, mode))
    elif args.command == "check-reorder":
        jobs.append(lambda: check_reordering(model, args.placement, default, mode))
    elif args.command == "check-symmetric":
        jobs.append(lambda: check_symmetricity(model, args.ansatz))
    elif args.command == "check-commutative":
        jobs.append(lambda: check_commutativity(model, mode))
    elif args.command == "solve":
        ans = model.ansatz(args.ansatz)
        if not ans.unknowns:
            raise UsageError(f"ansatz {ans.name!r} has no unknowns to solve for")
        jobs.append(lambda: solve_transform(model, args.kind, ans, mode, args.placement))
    elif args.command == "oracle":
        t = time.perf_counter()
        reports = oracle_checks(model, args.seed, args.trials)
        per = (time.perf_counter() - t) / max(len(reports), 1)
        for r in reports:
            doc.add(r, per)
    for job in jobs:
        t = time.perf_counter()
        rep = job()
        doc.add(rep, time.perf_counter() - t)
    return doc


def run_cli(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage())
        if args.command == "list-models":
            stdout.write("\n".join(names()) + "\n")
            return 0
        doc = _run(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        stderr.write(str(exc).rstrip() + "\n")
        return 2
    except TensorError as exc:
        stderr.write(f"anisogup: error: {exc}\n")
        return 2
    stdout.write(render_report(doc, args.format).decode("utf-8"))
    return doc.exit_code()


def main() -> None:
    sys.exit(run_cli())


__all__ = ["run_cli", "build_parser", "main"]
