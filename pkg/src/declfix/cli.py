"""Command-line front end.

Four subcommands: `fix` repairs a file, `detect` only reports, `train`
builds a model from a corpus, `eval` scores a corpus against truth
annotations.  Repaired source goes to stdout (or -o) so the tool can sit
in a shell pipeline; everything human-facing goes to stderr.

Exit codes depend on the outcome status alone: 0 for clean or fixed,
1 for a file that does not parse, 2 for anything the tool cannot repair
or an internal failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import DeclfixError
from .nnet.model import ModelConfig, SINGLE_HEAD
from .pipeline import (
    FixOptions,
    NEURAL,
    ORACLE,
    STATUS_CLEAN,
    STATUS_SYNTAX_ERROR,
    run_fix,
    run_train,
)
from .evaluate import run_eval


def _add_detection_flags(cmd):
    group = cmd.add_mutually_exclusive_group()
    group.add_argument(
        "--oracle",
        action="store_true",
        help="flag variables by scope analysis (default)",
    )
    group.add_argument(
        "--model",
        metavar="M",
        help="flag variables with a trained model file instead",
    )
    cmd.add_argument(
        "--fallback-type",
        default="int",
        metavar="T",
        help="type used when no binding rule matches (default: int)",
    )
    cmd.add_argument(
        "--array-size",
        type=int,
        default=1000,
        metavar="N",
        help="dimension for arrays whose size cannot be inferred (default: 1000)",
    )
    cmd.add_argument(
        "--best-evidence",
        action="store_true",
        help="weigh every use and pick the majority type instead of the first match",
    )


def _options(args, repair):
    return FixOptions(
        mode=NEURAL if args.model else ORACLE,
        model_path=args.model,
        fallback_type=args.fallback_type,
        default_array_size=args.array_size,
        best_evidence=args.best_evidence,
        emit_json_dir=getattr(args, "emit_ast_json", None),
        repair=repair,
    )


def _print_report(report, out):
    for finding in report.undeclared:
        size = f"[{finding.array_size}]" if finding.array_size is not None else ""
        print(
            f"{finding.uses[0]}: undeclared identifier '{finding.name}' "
            f"in function '{finding.function or '<file scope>'}'"
            + (
                f" -> {finding.type_text} {finding.name}{size} (case {finding.case_id})"
                if finding.type_text
                else ""
            ),
            file=out,
        )
    for warning in report.warnings:
        print(f"warning: {warning.message}", file=out)
    if report.error:
        print(f"error: {report.error}", file=out)


def _cmd_fix(args):
    report = run_fix(args.file, _options(args, repair=True))
    _print_report(report, sys.stderr)
    if report.repaired_source is not None:
        if args.output:
            with open(args.output, "w") as handle:
                handle.write(report.repaired_source)
        else:
            sys.stdout.write(report.repaired_source)
    return report.exit_code


def _cmd_detect(args):
    report = run_fix(args.file, _options(args, repair=False))
    _print_report(report, sys.stdout)
    if report.status == STATUS_SYNTAX_ERROR:
        return 1
    if report.status == STATUS_CLEAN and not report.undeclared:
        print("no undeclared identifiers", file=sys.stderr)
    return 0


def _cmd_train(args):
    config = ModelConfig(
        embedding_dim=args.embedding,
        hidden_units=args.hidden,
        num_lstm_layers=args.layers,
        dropout=args.dropout,
        batch_size=args.batch,
        learning_rate=args.lr,
        split_fraction=args.split,
        epochs=args.epochs,
        rng_seed=args.seed,
        candidate_nonlinearity="tanh" if args.candidate_tanh else "sigmoid",
        prediction_mode=SINGLE_HEAD if args.single_head else ModelConfig().prediction_mode,
    )
    config.validate()
    summary = run_train(args.corpus, config, args.out)
    print(f"vocabulary size: {summary.vocab_size}")
    print(f"training pairs: {summary.pair_count}")
    print(f"final loss: {summary.final_loss:.6f}")
    if summary.test_loss is not None:
        print(f"held-out loss: {summary.test_loss:.6f}")
    print(f"model written to {summary.model_path}")
    return 0


def _cmd_eval(args):
    report = run_eval(args.corpus, args.truth, _options(args, repair=False))
    sys.stdout.write(report.table_text())
    if args.report:
        report.write_json(args.report)
        print(f"report written to {args.report}", file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="declfix",
        description="detect and repair undeclared variables in C programs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fix = sub.add_parser("fix", help="repair a C file and print the result")
    fix.add_argument("file", help="C source file")
    _add_detection_flags(fix)
    fix.add_argument("-o", "--output", metavar="OUT", help="write repaired source here")
    fix.add_argument(
        "--emit-ast-json",
        metavar="DIR",
        help="also write the AST before/after repair as JSON into DIR",
    )
    fix.set_defaults(func=_cmd_fix)

    detect = sub.add_parser("detect", help="report undeclared variables, change nothing")
    detect.add_argument("file", help="C source file")
    _add_detection_flags(detect)
    detect.set_defaults(func=_cmd_detect)

    train = sub.add_parser("train", help="train a declaration predictor on a corpus")
    train.add_argument("--corpus", required=True, metavar="DIR", help="directory of .c files")
    train.add_argument("--epochs", type=int, default=100, metavar="N")
    train.add_argument("--seed", type=int, default=0, metavar="S")
    train.add_argument("--out", required=True, metavar="M", help="model file to write")
    train.add_argument("--embedding", type=int, default=512, metavar="K")
    train.add_argument("--hidden", type=int, default=512, metavar="H")
    train.add_argument("--layers", type=int, default=2, metavar="L")
    train.add_argument("--dropout", type=float, default=0.5, metavar="P")
    train.add_argument("--batch", type=int, default=3, metavar="B")
    train.add_argument("--lr", type=float, default=0.01, metavar="R")
    train.add_argument("--split", type=float, default=0.8, metavar="F")
    train.add_argument(
        "--single-head",
        action="store_true",
        help="predict the three declaration codes one at a time with one softmax",
    )
    train.add_argument(
        "--candidate-tanh",
        action="store_true",
        help="use tanh for the cell candidate instead of a sigmoid",
    )
    train.set_defaults(func=_cmd_train)

    ev = sub.add_parser("eval", help="score a corpus against truth annotations")
    ev.add_argument("--corpus", required=True, metavar="DIR")
    ev.add_argument("--truth", required=True, metavar="DIR")
    _add_detection_flags(ev)
    ev.add_argument("--report", metavar="R.json", help="write the report as JSON here")
    ev.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DeclfixError as exc:
        print(f"declfix: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"declfix: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
