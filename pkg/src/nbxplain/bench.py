"""Benchmark harness: explain sampled test instances across a grid of
precision thresholds and size targets, and aggregate the results.

For every sampled instance the pipeline front half (orientation, slack,
abductive explanation, quantization) runs once; each (delta, target) cell
then either accepts the untrimmed explanation or trims it.  Every trimmed
explanation is re-scored through a fresh counting table and the run aborts
with AuditFailure if that independent precision ever lands below delta.

Wall-clock trimming times appear in the human-readable table and the JSON
report only.  The machine CSV contains purely deterministic columns, so two
runs with the same seed produce byte-identical CSV files.
"""

from __future__ import annotations

import csv
import random
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from io import StringIO
from typing import Any, Optional, Sequence

from .axp import compute_axp
from .counting import precision
from .errors import (
    AuditFailure,
    DataFormatError,
    DomainMismatch,
    NotPredictedPositive,
    SeedNotWeakPAXp,
)
from .model import Dataset, NbcModel
from .paxp import approx_paxp, as_delta
from .xlc import nu, orient, quantize, quantized_weight_sum, reduce_model, slack


@dataclass(frozen=True)
class BenchCell:
    """Aggregates for one (delta, target size) configuration.

    Means of lengths and precisions are exact rationals over the instances
    the cell actually explained; ``mean_time_s`` averages trimming wall time
    over trimmed instances only and is None when nothing was trimmed.
    """

    delta: Fraction
    target_size: int
    instances: int
    wins: int
    trimmed: int
    mean_length: Optional[Fraction]
    std_length: Optional[float]
    mean_seed_length: Optional[Fraction]
    mean_precision: Optional[Fraction]
    std_precision_pct: Optional[float]
    win_rate: Optional[Fraction]
    mean_time_s: Optional[float]
    max_time_s: Optional[float]


@dataclass(frozen=True)
class SkippedInstance:
    """One instance a cell could not explain, with the error token."""

    instance: int
    delta: Optional[Fraction]
    target_size: Optional[int]
    error: str
    message: str


@dataclass(frozen=True)
class BenchReport:
    dataset: str
    model: str
    seed: int
    decimals: int
    order: str
    max_instances: int
    num_test_rows: int
    selected: tuple[int, ...]
    cells: tuple[BenchCell, ...]
    skipped: tuple[SkippedInstance, ...]
    quantization_disagreements: tuple[int, ...]


@dataclass(frozen=True)
class _InstanceOutcome:
    index: int
    seed_length: int
    disagreed: bool
    # per (delta, target): (length, precision, trimmed, elapsed) or an error
    results: tuple[tuple[Optional[tuple[int, Fraction, bool, float]], Optional[tuple[str, str]]], ...]


def run_bench(
    model: NbcModel,
    test: Dataset,
    deltas: Sequence[Fraction | str | float],
    targets: Sequence[int],
    max_instances: int = 200,
    seed: int = 0,
    decimals: int = 3,
    order: str = "delta",
    jobs: int = 1,
    dataset_name: str = "test",
    model_name: str = "model",
) -> BenchReport:
    if model.features != test.features:
        raise DomainMismatch("test dataset features do not match the model")
    if not test.rows:
        raise DataFormatError("benchmark needs at least one test row")
    if max_instances < 1:
        raise ValueError(f"max instances must be positive, got {max_instances}")
    if jobs < 1:
        raise ValueError(f"jobs must be positive, got {jobs}")
    if order not in ("delta", "lex"):
        raise ValueError(f"unknown traversal order {order!r}")
    deltas = [as_delta(d) for d in deltas]
    targets = [int(t) for t in targets]
    if not deltas or not targets:
        raise ValueError("need at least one delta and one target size")
    if any(t < 1 for t in targets):
        raise ValueError("target sizes must be positive")

    rows = test.rows
    k = min(max_instances, len(rows))
    selected = tuple(sorted(random.Random(seed).sample(range(len(rows)), k)))
    xlc = reduce_model(model)
    grid = [(d, t) for d in deltas for t in targets]

    def one(index: int) -> _InstanceOutcome:
        return _explain_one(xlc, rows[index][0], grid, decimals, order, index)

    if jobs == 1:
        outcomes = [one(i) for i in selected]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(one, selected))

    skipped: list[SkippedInstance] = []
    disagreements = tuple(o.index for o in outcomes if o.disagreed)
    cells = []
    for slot, (delta, target) in enumerate(grid):
        lengths: list[int] = []
        seed_lengths: list[int] = []
        precisions: list[Fraction] = []
        times: list[float] = []
        wins = 0
        trimmed_count = 0
        for outcome in outcomes:
            result, error = outcome.results[slot]
            if error is not None:
                token, message = error
                skipped.append(
                    SkippedInstance(outcome.index, delta, target, token, message)
                )
                continue
            length, prec, trimmed, elapsed = result
            if prec < delta:
                raise AuditFailure(
                    f"instance {outcome.index}: fresh-table precision {prec} "
                    f"fell below delta {delta}"
                )
            lengths.append(length)
            seed_lengths.append(outcome.seed_length)
            precisions.append(prec)
            if length <= target:
                wins += 1
            if trimmed:
                trimmed_count += 1
                times.append(elapsed)
        n = len(lengths)
        if n and Fraction(sum(lengths), n) > Fraction(sum(seed_lengths), n):
            raise AuditFailure(
                "mean explanation length exceeded mean seed length at "
                f"delta {delta}, target {target}"
            )
        cells.append(
            BenchCell(
                delta=delta,
                target_size=target,
                instances=n,
                wins=wins,
                trimmed=trimmed_count,
                mean_length=Fraction(sum(lengths), n) if n else None,
                std_length=statistics.pstdev(lengths) if n else None,
                mean_seed_length=Fraction(sum(seed_lengths), n) if n else None,
                mean_precision=sum(precisions, Fraction(0)) / n if n else None,
                std_precision_pct=(
                    statistics.pstdev(float(p * 100) for p in precisions)
                    if n
                    else None
                ),
                win_rate=Fraction(wins, n) if n else None,
                mean_time_s=sum(times) / len(times) if times else None,
                max_time_s=max(times) if times else None,
            )
        )
    return BenchReport(
        dataset=dataset_name,
        model=model_name,
        seed=seed,
        decimals=decimals,
        order=order,
        max_instances=max_instances,
        num_test_rows=len(rows),
        selected=selected,
        cells=tuple(cells),
        skipped=tuple(skipped),
        quantization_disagreements=disagreements,
    )


def _explain_one(
    xlc, v, grid, decimals: int, order: str, index: int
) -> _InstanceOutcome:
    oriented, _ = orient(xlc, v)
    results: list[tuple[Optional[tuple[int, Fraction, bool, float]], Optional[tuple[str, str]]]] = []
    try:
        profile = slack(oriented, v)
        axp = compute_axp(profile)
    except NotPredictedPositive as exc:
        error = (type(exc).__name__, str(exc))
        return _InstanceOutcome(
            index=index,
            seed_length=0,
            disagreed=False,
            results=tuple((None, error) for _ in grid),
        )

    qk = None
    disagreed = False
    if any(len(axp) > target for _, target in grid):
        qk = quantize(oriented, decimals)
        disagreed = (quantized_weight_sum(qk, v) < qk.rhs) != (nu(oriented, v) > 0)
    if order == "delta":
        traversal = tuple(sorted(axp, key=lambda i: (profile.deltas[i], i)))
    else:
        traversal = axp

    for delta, target in grid:
        if len(axp) <= target:
            results.append(((len(axp), Fraction(1), False, 0.0), None))
            continue
        try:
            start = time.perf_counter()
            trimmed = approx_paxp(qk, v, delta, axp, traversal)
            elapsed = time.perf_counter() - start
            prec = precision(qk, v, trimmed)
        except SeedNotWeakPAXp as exc:
            results.append((None, (type(exc).__name__, str(exc))))
            continue
        results.append(((len(trimmed), prec, True, elapsed), None))
    return _InstanceOutcome(
        index=index,
        seed_length=len(axp),
        disagreed=disagreed,
        results=tuple(results),
    )


def _fraction_str(value: Optional[Fraction]) -> Optional[str]:
    return None if value is None else f"{value.numerator}/{value.denominator}"


def _parse_fraction(value: Optional[str], where: str) -> Optional[Fraction]:
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise DataFormatError(f"{where}: bad fraction {value!r}") from None


def report_to_dict(report: BenchReport) -> dict[str, Any]:
    return {
        "dataset": report.dataset,
        "model": report.model,
        "seed": report.seed,
        "decimals": report.decimals,
        "order": report.order,
        "max_instances": report.max_instances,
        "num_test_rows": report.num_test_rows,
        "selected": list(report.selected),
        "cells": [
            {
                "delta": _fraction_str(cell.delta),
                "target_size": cell.target_size,
                "instances": cell.instances,
                "wins": cell.wins,
                "trimmed": cell.trimmed,
                "mean_length": _fraction_str(cell.mean_length),
                "std_length": cell.std_length,
                "mean_seed_length": _fraction_str(cell.mean_seed_length),
                "mean_precision": _fraction_str(cell.mean_precision),
                "std_precision_pct": cell.std_precision_pct,
                "win_rate": _fraction_str(cell.win_rate),
                "mean_time_s": cell.mean_time_s,
                "max_time_s": cell.max_time_s,
            }
            for cell in report.cells
        ],
        "skipped": [
            {
                "instance": skip.instance,
                "delta": _fraction_str(skip.delta),
                "target_size": skip.target_size,
                "error": skip.error,
                "message": skip.message,
            }
            for skip in report.skipped
        ],
        "quantization_disagreements": list(report.quantization_disagreements),
    }


def report_from_dict(payload: Any) -> BenchReport:
    if not isinstance(payload, dict):
        raise DataFormatError("report must be a JSON object")
    try:
        cells = tuple(
            BenchCell(
                delta=_parse_fraction(cell["delta"], "cell delta"),
                target_size=int(cell["target_size"]),
                instances=int(cell["instances"]),
                wins=int(cell["wins"]),
                trimmed=int(cell["trimmed"]),
                mean_length=_parse_fraction(cell["mean_length"], "mean_length"),
                std_length=cell["std_length"],
                mean_seed_length=_parse_fraction(
                    cell["mean_seed_length"], "mean_seed_length"
                ),
                mean_precision=_parse_fraction(
                    cell["mean_precision"], "mean_precision"
                ),
                std_precision_pct=cell["std_precision_pct"],
                win_rate=_parse_fraction(cell["win_rate"], "win_rate"),
                mean_time_s=cell["mean_time_s"],
                max_time_s=cell["max_time_s"],
            )
            for cell in payload["cells"]
        )
        skipped = tuple(
            SkippedInstance(
                instance=int(skip["instance"]),
                delta=_parse_fraction(skip["delta"], "skip delta"),
                target_size=(
                    None if skip["target_size"] is None else int(skip["target_size"])
                ),
                error=str(skip["error"]),
                message=str(skip["message"]),
            )
            for skip in payload["skipped"]
        )
        return BenchReport(
            dataset=str(payload["dataset"]),
            model=str(payload["model"]),
            seed=int(payload["seed"]),
            decimals=int(payload["decimals"]),
            order=str(payload["order"]),
            max_instances=int(payload["max_instances"]),
            num_test_rows=int(payload["num_test_rows"]),
            selected=tuple(int(i) for i in payload["selected"]),
            cells=cells,
            skipped=skipped,
            quantization_disagreements=tuple(
                int(i) for i in payload["quantization_disagreements"]
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"malformed report: {exc!r}") from None


CSV_COLUMNS = [
    "dataset",
    "delta",
    "target_size",
    "instances",
    "wins",
    "trimmed",
    "mean_length",
    "std_length",
    "mean_seed_length",
    "mean_precision",
    "std_precision_pct",
    "win_rate_pct",
]


def render_csv(report: BenchReport) -> str:
    """Machine-readable per-cell rows; deterministic (no wall-clock columns)."""
    out = StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cell in report.cells:
        writer.writerow(
            [
                report.dataset,
                _fraction_str(cell.delta),
                cell.target_size,
                cell.instances,
                cell.wins,
                cell.trimmed,
                _fraction_str(cell.mean_length) or "",
                "" if cell.std_length is None else repr(cell.std_length),
                _fraction_str(cell.mean_seed_length) or "",
                _fraction_str(cell.mean_precision) or "",
                "" if cell.std_precision_pct is None else repr(cell.std_precision_pct),
                "" if cell.win_rate is None else f"{float(cell.win_rate * 100):.2f}",
            ]
        )
    return out.getvalue()


def render_table(report: BenchReport) -> str:
    """Human-readable summary table, one row per (delta, target) cell."""
    header = (
        f"dataset: {report.dataset}   model: {report.model}   "
        f"instances: {len(report.selected)}/{report.num_test_rows}   "
        f"decimals: {report.decimals}   order: {report.order}   seed: {report.seed}"
    )
    columns = ["delta", "target", "N", "Length", "AXp len", "Precision %", "W %", "Time s"]
    rows = []
    for cell in report.cells:
        rows.append(
            [
                f"{float(cell.delta):g}",
                str(cell.target_size),
                str(cell.instances),
                _mean_std(cell.mean_length, cell.std_length),
                "-" if cell.mean_seed_length is None else f"{float(cell.mean_seed_length):.2f}",
                _mean_std(
                    None if cell.mean_precision is None else cell.mean_precision * 100,
                    cell.std_precision_pct,
                ),
                "-" if cell.win_rate is None else f"{float(cell.win_rate * 100):.2f}",
                "-" if cell.mean_time_s is None else f"{cell.mean_time_s:.4f}",
            ]
        )
    widths = [
        max(len(columns[j]), *(len(r[j]) for r in rows)) if rows else len(columns[j])
        for j in range(len(columns))
    ]
    lines = [header, ""]
    lines.append("  ".join(c.rjust(w) for c, w in zip(columns, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
    if report.quantization_disagreements:
        lines.append("")
        lines.append(
            f"quantization disagreements on {len(report.quantization_disagreements)} "
            f"instance(s): {list(report.quantization_disagreements)}"
        )
    if report.skipped:
        lines.append("")
        lines.append(f"skipped {len(report.skipped)} instance/cell pair(s):")
        for skip in report.skipped:
            where = (
                "all cells"
                if skip.delta is None
                else f"delta {float(skip.delta):g}, target {skip.target_size}"
            )
            lines.append(f"  instance {skip.instance} ({where}): {skip.error}")
    return "\n".join(lines) + "\n"


def _mean_std(mean: Optional[Fraction], std: Optional[float]) -> str:
    if mean is None:
        return "-"
    if std is None:
        return f"{float(mean):.2f}"
    return f"{float(mean):.2f}±{std:.2f}"
