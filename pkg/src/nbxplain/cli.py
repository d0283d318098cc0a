"""Command-line surface.

Subcommands: train, explain, count, bench, export-report.  Exit codes:
0 success, 2 usage error (argparse's own convention), 3 data or domain
error, 4 post-hoc audit failure.  Errors print one line to stderr in the
form ``error: <Token>: <message>`` where the token is the exception class
name, so scripts can match on it.

Feature positions on the command line (the --fix flag) are 1-based in
header order; internally everything is 0-based.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .axp import is_weak_axp
from .bench import render_csv, render_table, report_from_dict, report_to_dict, run_bench
from .counting import CountTable
from .dataio import (
    load_dataset,
    load_model,
    reindex_dataset,
    save_model,
    split_dataset,
)
from .errors import AuditFailure, DataFormatError, NbxplainError
from .model import (
    NbcModel,
    accuracy,
    instance_from_labels,
    instance_labels,
    predict,
    train,
)
from .paxp import Explanation, as_delta, explain
from .xlc import orient, quantize, reduce_model, slack


def _delta_arg(text: str) -> Fraction:
    try:
        return as_delta(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _delta_list_arg(text: str) -> list[Fraction]:
    return [_delta_arg(tok) for tok in text.split(",") if tok]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _int_list_arg(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def _split_fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"split must lie in (0, 1], got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nbxplain",
        description=(
            "Train binary Naive Bayes classifiers over categorical features "
            "and explain their predictions with provably precise feature sets."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a model from a CSV dataset")
    p_train.add_argument("data", help="dataset CSV (last column is the class)")
    p_train.add_argument("--alpha", type=float, default=1.0, help="smoothing constant (> 0)")
    p_train.add_argument("--out", default="model.json", help="output model path")
    p_train.add_argument(
        "--split", type=_split_fraction, default=0.8,
        help="fraction of rows used for training (rest reports test accuracy)",
    )
    p_train.add_argument("--seed", type=int, default=0, help="split shuffle seed")
    p_train.set_defaults(func=cmd_train)

    p_explain = sub.add_parser("explain", help="explain one instance's prediction")
    p_explain.add_argument("model", help="model JSON path")
    p_explain.add_argument(
        "--instance", required=True,
        help="comma-separated value labels, one per feature",
    )
    p_explain.add_argument("--delta", type=_delta_arg, default=as_delta("0.95"),
                           help="precision threshold in (0, 1]")
    p_explain.add_argument("--decimals", type=int, choices=range(0, 7), default=3,
                           help="quantization decimal places")
    p_explain.add_argument("--target-size", type=_positive_int, default=7,
                           help="explanations at most this long skip trimming")
    p_explain.add_argument("--order", choices=("delta", "lex"), default="delta",
                           help="trimming traversal order")
    p_explain.add_argument("--json", action="store_true", help="emit a JSON record")
    p_explain.set_defaults(func=cmd_explain)

    p_count = sub.add_parser("count", help="count completions keeping the prediction")
    p_count.add_argument("model", help="model JSON path")
    p_count.add_argument("--instance", required=True,
                         help="comma-separated value labels, one per feature")
    p_count.add_argument("--fix", default="",
                         help="1-based feature positions to hold fixed, e.g. \"2,4\"")
    p_count.add_argument("--decimals", type=int, choices=range(0, 7), default=3,
                         help="quantization decimal places")
    p_count.set_defaults(func=cmd_count)

    p_bench = sub.add_parser("bench", help="run the benchmark grid on test data")
    p_bench.add_argument("model", help="model JSON path")
    p_bench.add_argument("test", help="test dataset CSV")
    p_bench.add_argument("--deltas", type=_delta_list_arg,
                         default=_delta_list_arg("0.90,0.93,0.95,0.98"),
                         help="comma-separated precision thresholds")
    p_bench.add_argument("--targets", type=_int_list_arg, default=[9, 7, 4],
                         help="comma-separated size targets")
    p_bench.add_argument("--max-instances", type=_positive_int, default=200)
    p_bench.add_argument("--seed", type=int, default=0, help="instance sampling seed")
    p_bench.add_argument("--decimals", type=int, choices=range(0, 7), default=3)
    p_bench.add_argument("--order", choices=("delta", "lex"), default="delta")
    p_bench.add_argument("--jobs", type=_positive_int, default=1,
                         help="worker threads for instance evaluation")
    p_bench.add_argument("--csv", help="write the deterministic machine CSV here")
    p_bench.add_argument("--json", dest="json_out", help="write the full JSON report here")
    p_bench.set_defaults(func=cmd_bench)

    p_export = sub.add_parser(
        "export-report", help="re-render a saved JSON benchmark report"
    )
    p_export.add_argument("report", help="report JSON path")
    p_export.add_argument("--format", choices=("table", "csv"), default="table")
    p_export.add_argument("--out", help="output path (default stdout)")
    p_export.set_defaults(func=cmd_export_report)
    return parser


def _parse_instance(model: NbcModel, text: str) -> tuple[int, ...]:
    return instance_from_labels(model.features, text.split(","))


def _parse_fix(model: NbcModel, text: str, parser_error) -> tuple[int, ...]:
    positions = []
    for tok in text.split(","):
        if not tok:
            continue
        try:
            pos = int(tok)
        except ValueError:
            parser_error(f"--fix entries must be integers, got {tok!r}")
        if not 1 <= pos <= model.num_features:
            parser_error(
                f"--fix position {pos} outside 1..{model.num_features}"
            )
        positions.append(pos - 1)
    return tuple(sorted(set(positions)))


def cmd_train(args: argparse.Namespace) -> int:
    data = load_dataset(args.data)
    train_part, test_part = split_dataset(data, args.split, args.seed)
    model = train(train_part, alpha=args.alpha)
    save_model(model, args.out)
    print(
        f"trained on {len(train_part.rows)} rows "
        f"({model.num_features} features, classes {model.classes[0]!r} / "
        f"{model.classes[1]!r}, alpha {args.alpha:g})"
    )
    acc = accuracy(model, train_part)
    print(f"train accuracy: {acc} = {float(acc):.4f}")
    if test_part.rows:
        acc = accuracy(model, test_part)
        print(f"test accuracy:  {acc} = {float(acc):.4f} on {len(test_part.rows)} rows")
    else:
        print("test accuracy:  n/a (no held-out rows)")
    print(f"model written to {args.out}")
    return 0


def _audit_explanation(
    model: NbcModel, v: Sequence[int], result: Explanation, decimals: int
) -> bool:
    """Re-verify a finished explanation from scratch.

    Untrimmed explanations are checked against a freshly computed slack
    profile; trimmed ones against a fresh counting table at the same
    quantization.
    """
    oriented, explained_class = orient(reduce_model(model), v)
    if result.kind == "AXp":
        return is_weak_axp(slack(oriented, v), result.features)
    qk = quantize(oriented, decimals, target_class=explained_class)
    status = [
        v[i] if i in set(result.features) else None for i in range(len(v))
    ]
    table = CountTable(qk, status)
    return Fraction(table.count(), table.free_space()) >= result.delta


def cmd_explain(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    v = _parse_instance(model, args.instance)
    result = explain(
        model, v, args.delta, args.target_size, args.decimals, args.order
    )
    if not _audit_explanation(model, v, result, args.decimals):
        raise AuditFailure(
            "explanation failed its from-scratch re-verification"
        )
    predicted = model.classes[predict(model, v)[0]]
    names = [model.features[i].name for i in result.features]
    if args.json:
        record = {
            "instance": list(instance_labels(model.features, v)),
            "predicted_class": predicted,
            "kind": result.kind,
            "features": list(result.features),
            "feature_names": names,
            "precision": f"{result.precision.numerator}/{result.precision.denominator}",
            "delta": f"{result.delta.numerator}/{result.delta.denominator}",
            "seed": list(result.seed),
            "elapsed_s": result.elapsed,
            "decimals": args.decimals,
            "order": args.order,
            "target_size": args.target_size,
        }
        print(json.dumps(record, indent=2))
        return 0
    print(f"instance: {args.instance} -> predicted {predicted!r}")
    print(f"kind: {result.kind}")
    shown = ", ".join(names) if names else "(none; prediction holds unconditionally)"
    print(f"features ({len(result.features)}/{model.num_features}): {shown}")
    print(
        f"precision: {result.precision} = {float(result.precision) * 100:.2f}%  "
        f"(delta {result.delta} = {float(result.delta) * 100:.2f}%)"
    )
    print(f"seed size: {len(result.seed)}")
    if result.kind == "ApproxPAXp":
        print(f"trim time: {result.elapsed:.4f} s")
    return 0


def cmd_count(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    v = _parse_instance(model, args.instance)

    def bad_usage(message: str) -> None:
        print(f"error: Usage: {message}", file=sys.stderr)
        raise SystemExit(2)

    fixed = _parse_fix(model, args.fix, bad_usage)
    oriented, explained_class = orient(reduce_model(model), v)
    qk = quantize(oriented, args.decimals, target_class=explained_class)
    table = CountTable(qk, [v[i] if i in set(fixed) else None for i in range(len(v))])
    n_target = table.count()
    space = table.free_space()
    prec = Fraction(n_target, space)
    target_label = model.classes[explained_class]
    other_label = model.classes[1 - explained_class]
    fixed_shown = ",".join(str(i + 1) for i in fixed) if fixed else "(none)"
    print(f"predicted class: {target_label!r}")
    print(f"fixed features: {fixed_shown}")
    print(f"free space: {space}")
    print(f"n[{target_label}] = {n_target}")
    print(f"n[{other_label}] = {space - n_target}")
    print(f"precision = {prec} = {float(prec) * 100:.2f}%")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    test = reindex_dataset(load_dataset(args.test), model)
    report = run_bench(
        model,
        test,
        deltas=args.deltas,
        targets=args.targets,
        max_instances=args.max_instances,
        seed=args.seed,
        decimals=args.decimals,
        order=args.order,
        jobs=args.jobs,
        dataset_name=str(args.test),
        model_name=str(args.model),
    )
    print(render_table(report), end="")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as handle:
            handle.write(render_csv(report))
        print(f"csv written to {args.csv}")
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as handle:
            json.dump(report_to_dict(report), handle, indent=2)
            handle.write("\n")
        print(f"json written to {args.json_out}")
    return 0


def cmd_export_report(args: argparse.Namespace) -> int:
    with open(args.report, encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{args.report}: invalid JSON: {exc}") from None
    report = report_from_dict(payload)
    rendered = render_table(report) if args.format == "table" else render_csv(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(rendered)
        print(f"{args.format} written to {args.out}")
    else:
        print(rendered, end="")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AuditFailure as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    except NbxplainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: IO: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
