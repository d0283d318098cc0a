"""Binary Naive Bayes classifiers over categorical features.

A model keeps natural-log priors and per-feature, per-value, per-class
log-likelihoods.  Class index 0 is the negative class, index 1 the positive
class; ties in the joint log-probability resolve to the negative class, which
matches the sign convention of the linear reduction (positive iff the margin
is strictly greater than zero).

Value indices are 0-based positions into each feature's domain tuple.  All
user-facing surfaces (CSV files, the CLI) speak in value *labels*; indices
are an internal representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainMismatch, EmptyDataset, NonPositiveAlpha, SingleClassDataset

NEG = 0
POS = 1

#: An instance is one 0-based value index per feature.
Instance = tuple[int, ...]


@dataclass(frozen=True)
class FeatureSpec:
    """A named categorical feature with an ordered domain of value labels."""

    name: str
    domain: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.domain) < 1:
            raise ValueError(f"feature {self.name!r}: empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError(f"feature {self.name!r}: duplicate domain values")

    @property
    def size(self) -> int:
        return len(self.domain)


@dataclass(frozen=True)
class NbcModel:
    """A trained (or imported) binary NBC.

    ``log_likelihood[i][k][c]`` is the natural log of P(x_i = k | c).  All
    stored values must be finite; models with zero probabilities are rejected
    at construction so downstream arithmetic never meets -inf.
    """

    features: tuple[FeatureSpec, ...]
    classes: tuple[str, str]
    log_prior: tuple[float, float]
    log_likelihood: tuple[tuple[tuple[float, float], ...], ...]

    def __post_init__(self) -> None:
        if len(self.classes) != 2:
            raise ValueError("binary model requires exactly two class labels")
        if len(self.log_prior) != 2:
            raise ValueError("log_prior must have one entry per class")
        if len(self.log_likelihood) != len(self.features):
            raise ValueError("log_likelihood must have one table per feature")
        for value in self.log_prior:
            _require_finite(value, "log_prior")
        for spec, table in zip(self.features, self.log_likelihood):
            if len(table) != spec.size:
                raise ValueError(
                    f"feature {spec.name!r}: likelihood table has {len(table)} "
                    f"rows for a domain of size {spec.size}"
                )
            for row in table:
                if len(row) != 2:
                    raise ValueError(
                        f"feature {spec.name!r}: expected two per-class entries"
                    )
                for value in row:
                    _require_finite(value, f"log_likelihood[{spec.name}]")

    @property
    def num_features(self) -> int:
        return len(self.features)

    @property
    def domain_sizes(self) -> tuple[int, ...]:
        return tuple(spec.size for spec in self.features)


@dataclass(frozen=True)
class Dataset:
    """Labelled categorical rows sharing one feature layout."""

    features: tuple[FeatureSpec, ...]
    classes: tuple[str, str]
    rows: tuple[tuple[Instance, int], ...]

    def __post_init__(self) -> None:
        for instance, label in self.rows:
            validate_instance(self.features, instance)
            if label not in (NEG, POS):
                raise ValueError(f"class index {label} out of range")


def _require_finite(value: float, where: str) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{where}: non-finite value {value!r}")


def validate_instance(features: Sequence[FeatureSpec], x: Sequence[int]) -> None:
    """Raise DomainMismatch unless ``x`` conforms to ``features``."""
    if len(x) != len(features):
        raise DomainMismatch(
            f"instance has {len(x)} values, model has {len(features)} features"
        )
    for spec, value in zip(features, x):
        if not 0 <= value < spec.size:
            raise DomainMismatch(
                f"feature {spec.name!r}: value index {value} outside domain "
                f"of size {spec.size}"
            )


def instance_from_labels(
    features: Sequence[FeatureSpec], labels: Iterable[str]
) -> Instance:
    """Translate value labels into an index instance, naming any offender."""
    labels = list(labels)
    if len(labels) != len(features):
        raise DomainMismatch(
            f"instance has {len(labels)} values, model has {len(features)} features"
        )
    values = []
    for spec, label in zip(features, labels):
        try:
            values.append(spec.domain.index(label))
        except ValueError:
            raise DomainMismatch(
                f"feature {spec.name!r}: unknown value {label!r}"
            ) from None
    return tuple(values)


def instance_labels(features: Sequence[FeatureSpec], x: Sequence[int]) -> tuple[str, ...]:
    validate_instance(features, x)
    return tuple(spec.domain[value] for spec, value in zip(features, x))


def train(data: Dataset, alpha: float = 1.0) -> NbcModel:
    """Fit a smoothed maximum-likelihood binary NBC.

    With ``N`` rows, ``count(c)`` per-class row counts and ``count(i, k, c)``
    per-feature value counts, the estimates are

        prior(c)           = (count(c) + alpha) / (N + 2 * alpha)
        likelihood(i, k, c) = (count(i, k, c) + alpha) / (count(c) + d_i * alpha)

    stored as natural logs.  ``alpha`` must be strictly positive so every
    stored log is finite.
    """
    if alpha <= 0:
        raise NonPositiveAlpha(f"smoothing alpha must be > 0, got {alpha}")
    if not data.rows:
        raise EmptyDataset("cannot train on a dataset with no rows")

    class_counts = [0, 0]
    for _, label in data.rows:
        class_counts[label] += 1
    if 0 in class_counts:
        missing = data.classes[class_counts.index(0)]
        raise SingleClassDataset(f"class {missing!r} never occurs in the data")

    total = len(data.rows)
    log_prior = tuple(
        math.log((class_counts[c] + alpha) / (total + 2 * alpha)) for c in (NEG, POS)
    )

    value_counts = [
        [[0, 0] for _ in range(spec.size)] for spec in data.features
    ]
    for instance, label in data.rows:
        for i, value in enumerate(instance):
            value_counts[i][value][label] += 1

    log_likelihood = tuple(
        tuple(
            tuple(
                math.log(
                    (value_counts[i][k][c] + alpha)
                    / (class_counts[c] + spec.size * alpha)
                )
                for c in (NEG, POS)
            )
            for k in range(spec.size)
        )
        for i, spec in enumerate(data.features)
    )
    return NbcModel(
        features=data.features,
        classes=data.classes,
        log_prior=log_prior,
        log_likelihood=log_likelihood,
    )


def joint_log_scores(model: NbcModel, x: Sequence[int]) -> tuple[float, float]:
    """Per-class log-joint ln P(c) + sum_i ln P(x_i | c)."""
    validate_instance(model.features, x)
    scores = list(model.log_prior)
    for i, value in enumerate(x):
        row = model.log_likelihood[i][value]
        scores[NEG] += row[NEG]
        scores[POS] += row[POS]
    return (scores[NEG], scores[POS])


def predict(model: NbcModel, x: Sequence[int]) -> tuple[int, tuple[float, float]]:
    """Predicted class index and the two log-joint scores.

    Returns the positive class iff its score is strictly greater; exact ties
    go to the negative class.
    """
    scores = joint_log_scores(model, x)
    label = POS if scores[POS] > scores[NEG] else NEG
    return label, scores


def accuracy(model: NbcModel, data: Dataset) -> Fraction:
    """Fraction of rows whose prediction matches the label, as an exact rational."""
    if model.features != data.features:
        raise DomainMismatch("dataset features do not match model features")
    if not data.rows:
        raise EmptyDataset("accuracy of an empty dataset is undefined")
    hits = sum(1 for x, label in data.rows if predict(model, x)[0] == label)
    return Fraction(hits, len(data.rows))
