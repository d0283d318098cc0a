"""File formats: CSV datasets and the JSON model interchange schema.

Dataset CSV: UTF-8, comma separated, first row is a header whose last column
is the class label column; every other row holds categorical string tokens.
Feature domains and the class pair are the sorted distinct tokens seen in a
full scan of the file, so a value that only occurs in a held-out split is
still part of the domain (smoothing assigns it a nonzero likelihood).

Model JSON:

    {
      "classes": [neg, pos],
      "features": [{"name": str, "domain": [str, ...]}, ...],
      "log_prior": [neg, pos],
      "log_likelihood": [per feature: [per value: [neg, pos]]]
    }

with natural-log values.  Imported models must be finite everywhere; files
carrying -inf (zero probabilities) are rejected.
"""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path
from typing import Any

from .errors import DataFormatError, DomainMismatch, EmptyDataset, SingleClassDataset
from .model import (
    Dataset,
    FeatureSpec,
    NbcModel,
    instance_from_labels,
    instance_labels,
)


def load_dataset(path: str | Path) -> Dataset:
    """Read a dataset CSV, with line numbers on every format complaint."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{path}: file is empty") from None
        if len(header) < 2:
            raise DataFormatError(
                f"{path}: line 1: header needs at least one feature column "
                "and one class column"
            )
        names = header[:-1]
        if len(set(names)) != len(names):
            raise DataFormatError(f"{path}: line 1: duplicate feature names")

        raw_rows: list[tuple[list[str], str]] = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise DataFormatError(
                    f"{path}: line {reader.line_num}: expected {len(header)} "
                    f"fields, got {len(row)}"
                )
            raw_rows.append((row[:-1], row[-1]))

    if not raw_rows:
        raise EmptyDataset(f"{path}: no data rows")

    labels = sorted({label for _, label in raw_rows})
    if len(labels) == 1:
        raise SingleClassDataset(
            f"{path}: every row is labelled {labels[0]!r}"
        )
    if len(labels) > 2:
        raise DataFormatError(
            f"{path}: found {len(labels)} class labels {labels}; binary models "
            "support exactly two"
        )

    domains = [sorted({row[i] for row, _ in raw_rows}) for i in range(len(names))]
    features = tuple(
        FeatureSpec(name=name, domain=tuple(domain))
        for name, domain in zip(names, domains)
    )
    value_index = [{v: k for k, v in enumerate(domain)} for domain in domains]
    label_index = {label: c for c, label in enumerate(labels)}
    rows = tuple(
        (
            tuple(value_index[i][v] for i, v in enumerate(row)),
            label_index[label],
        )
        for row, label in raw_rows
    )
    return Dataset(features=features, classes=(labels[0], labels[1]), rows=rows)


def save_dataset(data: Dataset, path: str | Path, class_name: str = "class") -> None:
    """Write a dataset back out in the CSV format load_dataset reads."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([spec.name for spec in data.features] + [class_name])
        for instance, label in data.rows:
            writer.writerow(
                list(instance_labels(data.features, instance))
                + [data.classes[label]]
            )


def split_dataset(
    data: Dataset, train_fraction: float = 0.8, seed: int = 0
) -> tuple[Dataset, Dataset]:
    """Deterministic seeded shuffle split; both parts keep the full domains."""
    if not 0 < train_fraction <= 1:
        raise ValueError(
            f"train fraction must lie in (0, 1], got {train_fraction}"
        )
    order = list(range(len(data.rows)))
    random.Random(seed).shuffle(order)
    cut = max(1, round(train_fraction * len(order)))
    train_rows = tuple(data.rows[i] for i in sorted(order[:cut]))
    test_rows = tuple(data.rows[i] for i in sorted(order[cut:]))
    train = Dataset(features=data.features, classes=data.classes, rows=train_rows)
    test = Dataset(features=data.features, classes=data.classes, rows=test_rows)
    return train, test


def reindex_dataset(data: Dataset, model: NbcModel) -> Dataset:
    """Re-encode a dataset against a model's feature domains and class pair.

    A held-out CSV may not exercise every domain value, so its scanned
    domains can be smaller than the model's; translating through labels
    aligns the two.  Unknown labels or mismatched feature names raise
    DomainMismatch.
    """
    if tuple(spec.name for spec in data.features) != tuple(
        spec.name for spec in model.features
    ):
        raise DomainMismatch(
            "dataset feature names do not match the model's feature names"
        )
    class_index = {label: c for c, label in enumerate(model.classes)}
    rows = []
    for instance, label in data.rows:
        class_label = data.classes[label]
        if class_label not in class_index:
            raise DomainMismatch(
                f"class label {class_label!r} not among model classes "
                f"{list(model.classes)}"
            )
        rows.append(
            (
                instance_from_labels(
                    model.features, instance_labels(data.features, instance)
                ),
                class_index[class_label],
            )
        )
    return Dataset(
        features=model.features, classes=model.classes, rows=tuple(rows)
    )


def model_to_dict(model: NbcModel) -> dict[str, Any]:
    return {
        "classes": list(model.classes),
        "features": [
            {"name": spec.name, "domain": list(spec.domain)}
            for spec in model.features
        ],
        "log_prior": list(model.log_prior),
        "log_likelihood": [
            [list(row) for row in table] for table in model.log_likelihood
        ],
    }


def model_from_dict(payload: Any) -> NbcModel:
    """Build a model from parsed JSON, naming the offending key on failure."""
    if not isinstance(payload, dict):
        raise DataFormatError("model file must hold a JSON object")
    expected = {"classes", "features", "log_prior", "log_likelihood"}
    if set(payload) != expected:
        raise DataFormatError(
            f"model object must have exactly the keys {sorted(expected)}, "
            f"got {sorted(payload)}"
        )

    classes = payload["classes"]
    if (
        not isinstance(classes, list)
        or len(classes) != 2
        or not all(isinstance(c, str) for c in classes)
    ):
        raise DataFormatError('"classes" must be a list of two strings')

    raw_features = payload["features"]
    if not isinstance(raw_features, list) or not raw_features:
        raise DataFormatError('"features" must be a non-empty list')
    features = []
    for n, entry in enumerate(raw_features):
        if (
            not isinstance(entry, dict)
            or set(entry) != {"name", "domain"}
            or not isinstance(entry.get("name"), str)
            or not isinstance(entry.get("domain"), list)
            or not all(isinstance(v, str) for v in entry["domain"])
        ):
            raise DataFormatError(
                f'"features"[{n}] must be {{"name": str, "domain": [str...]}}'
            )
        try:
            features.append(
                FeatureSpec(name=entry["name"], domain=tuple(entry["domain"]))
            )
        except ValueError as exc:
            raise DataFormatError(f'"features"[{n}]: {exc}') from None

    log_prior = _real_vector(payload["log_prior"], '"log_prior"')
    raw_tables = payload["log_likelihood"]
    if not isinstance(raw_tables, list) or len(raw_tables) != len(features):
        raise DataFormatError(
            '"log_likelihood" must hold one table per feature'
        )
    log_likelihood = tuple(
        tuple(
            _real_vector(row, f'"log_likelihood"[{i}][{k}]')
            for k, row in enumerate(table)
        )
        if isinstance(table, list)
        else _fail(f'"log_likelihood"[{i}] must be a list')
        for i, table in enumerate(raw_tables)
    )

    try:
        return NbcModel(
            features=tuple(features),
            classes=(classes[0], classes[1]),
            log_prior=log_prior,
            log_likelihood=log_likelihood,
        )
    except ValueError as exc:
        raise DataFormatError(str(exc)) from None


def _fail(message: str) -> Any:
    raise DataFormatError(message)


def _real_vector(value: Any, where: str) -> tuple[float, float]:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise DataFormatError(f"{where} must be a list of two numbers")
    return (float(value[0]), float(value[1]))


def save_model(model: NbcModel, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(model_to_dict(model), handle, indent=2, ensure_ascii=False)
        handle.write("\n")


def load_model(path: str | Path) -> NbcModel:
    with open(path, encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: invalid JSON: {exc}") from None
    try:
        return model_from_dict(payload)
    except DataFormatError as exc:
        raise DataFormatError(f"{path}: {exc}") from None
