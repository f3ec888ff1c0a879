"""Command line entry point: ``ltlreduce <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys

from .classify import NotInNNFError, Variant, is_pure_eventuality
from .harness import CorpusError, FuzzConfig, SuiteReport, fuzz, run_corpus
from .reduce import reduce
from .semantics import (
    Bounds, WordSyntaxError, equivalent_bounded, evaluate,
    left_append_closed_bounded, parse_word, powerset_letters, singleton_letters,
)
from .syntax import ParseError, format_formula, parse, props

EXIT_INPUT_ERROR = 2


def _variant(text: str) -> Variant:
    try:
        return Variant(text.lower())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown variant {text!r}") from None


def _add_bounds(p: argparse.ArgumentParser, append: bool = False) -> None:
    d = Bounds()
    p.add_argument("--max-prefix", type=int, default=d.max_prefix)
    p.add_argument("--max-period", type=int, default=d.max_period)
    p.add_argument("--max-props", type=int, default=d.max_props)
    if append:
        p.add_argument("--max-append", type=int, default=d.max_append)
    p.add_argument("--props", help="proposition pool for letters (default: those in the formulas)")
    p.add_argument("--exclusive-letters", action="store_true",
                   help="one proposition per letter instead of all subsets")


def _bounds(args) -> Bounds:
    return Bounds(args.max_prefix, args.max_period, args.max_props,
                  getattr(args, "max_append", Bounds().max_append))


def _letters(args, *formulas):
    if args.props is None and not args.exclusive_letters:
        return None
    if args.props is not None:
        names = sorted({p.strip() for p in args.props.split(",") if p.strip()})
    else:
        names = sorted(set().union(*(props(f) for f in formulas)))[: args.max_props]
    return singleton_letters(names) if args.exclusive_letters else powerset_letters(names)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ltlreduce", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="pure-eventuality membership of an NNF formula")
    p.add_argument("--variant", type=_variant, required=True)
    p.add_argument("formula")

    p = sub.add_parser("reduce", help="apply the pure-eventuality reduction rules")
    p.add_argument("--variant", type=_variant, required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("formula")

    p = sub.add_parser("eval", help="evaluate a formula on a lasso word")
    p.add_argument("formula")
    p.add_argument("--word", required=True, help='e.g. "a | c" for a.c^omega')
    p.add_argument("--position", type=int, default=0)

    p = sub.add_parser("check-equiv", help="bounded equivalence check")
    p.add_argument("left")
    p.add_argument("right")
    _add_bounds(p)

    p = sub.add_parser("check-lac", help="bounded left-append closure check")
    p.add_argument("formula")
    _add_bounds(p, append=True)

    for name, helptext in (("fuzz", "differential run on random formulas"),
                           ("corpus", "differential run on a formula file")):
        p = sub.add_parser(name, help=helptext)
        if name == "fuzz":
            p.add_argument("--seed", type=int, default=42)
            p.add_argument("--count", type=int, default=1000)
            p.add_argument("--max-depth", type=int, default=6)
            p.add_argument("--props", default="a,b,c")
        else:
            p.add_argument("path")
        p.add_argument("--max-prefix", type=int, default=Bounds().max_prefix)
        p.add_argument("--max-period", type=int, default=Bounds().max_period)
        p.add_argument("--json", action="store_true", help="JSON report instead of TSV")
        p.add_argument("--plot-dir", help="also write report figures into this directory")
    return parser


def _emit_report(report: SuiteReport, args) -> int:
    print(report.to_json() if args.json else report.to_tsv())
    if args.plot_dir:
        from .plotting import render_report_figures
        for path in render_report_figures(report, args.plot_dir):
            print(f"wrote {path}", file=sys.stderr)
    return report.exit_code


def run(args) -> int:
    cmd = args.command
    if cmd == "classify":
        result = is_pure_eventuality(parse(args.formula), args.variant)
        print(f"pure-eventuality: {str(result).lower()}")
        return 0
    if cmd == "reduce":
        f = parse(args.formula)
        reduced, trace = reduce(f, args.variant)
        if args.trace:
            if trace.normalized_input:
                print(f"# nnf: {format_formula(trace.normalized)}")
            for line in trace.lines():
                print(line)
        print(format_formula(reduced))
        return 0
    if cmd == "eval":
        print(str(evaluate(parse(args.formula), parse_word(args.word), args.position)).lower())
        return 0
    if cmd == "check-equiv":
        f, g = parse(args.left), parse(args.right)
        verdict = equivalent_bounded(f, g, _bounds(args), letters=_letters(args, f, g))
        print(verdict.describe())
        return 0 if verdict.ok else 1
    if cmd == "check-lac":
        f = parse(args.formula)
        verdict = left_append_closed_bounded(f, _bounds(args), letters=_letters(args, f))
        print(verdict.describe())
        return 0 if verdict.ok else 1
    bounds = Bounds(max_prefix=args.max_prefix, max_period=args.max_period)
    if cmd == "fuzz":
        config = FuzzConfig(seed=args.seed, count=args.count, max_depth=args.max_depth,
                            props=tuple(p.strip() for p in args.props.split(",") if p.strip()),
                            bounds=bounds)
        config.validate()
        return _emit_report(fuzz(config), args)
    if cmd == "corpus":
        return _emit_report(run_corpus(args.path, bounds), args)
    raise AssertionError(cmd)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (ParseError, NotInNNFError, WordSyntaxError, CorpusError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
