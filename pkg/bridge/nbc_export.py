"""Export a fitted scikit-learn CategoricalNB to the nbxplain JSON format.

The exporter transcribes the estimator's stored log-probabilities verbatim;
it never recomputes anything, so a parity failure between the exported file
and scikit-learn can only come from an encoding mistake, not from numerics.

scikit-learn works on integer category codes, so the caller must supply the
fitted category maps (one list of value labels per feature, label position =
code), typically ``encoder.categories_`` from the OrdinalEncoder used to
prepare the training matrix.

Written JSON:

    {
      "classes": [neg, pos],
      "features": [{"name": str, "domain": [str, ...]}, ...],
      "log_prior": [neg, pos],
      "log_likelihood": [per feature: [per value: [neg, pos]]]
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence


class NotBinary(Exception):
    """The fitted model does not have exactly two classes."""


class InfiniteLogProbability(Exception):
    """A transcribed log-probability is not finite.

    CategoricalNB stores log(0) = -inf for a category never seen with a
    class when smoothing is disabled; the target format requires finite
    values everywhere, so such models must be refit with smoothing.
    """


class SchemaWriteError(Exception):
    """The JSON file could not be written."""


@dataclass(frozen=True)
class ExportedModel:
    """In-memory mirror of the JSON document."""

    classes: tuple[str, str]
    feature_names: tuple[str, ...]
    domains: tuple[tuple[str, ...], ...]
    log_prior: tuple[float, float]
    log_likelihood: tuple[tuple[tuple[float, float], ...], ...]

    def __post_init__(self) -> None:
        if len(self.classes) != 2:
            raise NotBinary(
                f"expected two classes, got {len(self.classes)}"
            )
        for value in self.log_prior:
            _require_finite(value, "class prior")
        if len(self.feature_names) != len(self.domains) or len(
            self.feature_names
        ) != len(self.log_likelihood):
            raise ValueError("feature names, domains, and tables must align")
        for name, domain, table in zip(
            self.feature_names, self.domains, self.log_likelihood
        ):
            if len(table) != len(domain):
                raise ValueError(
                    f"feature {name!r}: {len(table)} probability rows for "
                    f"{len(domain)} category labels; if the training data "
                    "never used the trailing categories, refit with "
                    "min_categories set to the full domain size"
                )
            for row in table:
                if len(row) != 2:
                    raise ValueError(
                        f"feature {name!r}: expected two per-class entries"
                    )
                for value in row:
                    _require_finite(value, f"feature {name!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "classes": list(self.classes),
            "features": [
                {"name": name, "domain": list(domain)}
                for name, domain in zip(self.feature_names, self.domains)
            ],
            "log_prior": list(self.log_prior),
            "log_likelihood": [
                [list(row) for row in table] for table in self.log_likelihood
            ],
        }

    def log_joint(self, codes: Sequence[int]) -> tuple[float, float]:
        """Score one integer-coded row exactly as the target runtime does:
        prior first, then the per-feature terms in feature order."""
        scores = list(self.log_prior)
        for table, code in zip(self.log_likelihood, codes):
            for c in (0, 1):
                scores[c] += table[code][c]
        return (scores[0], scores[1])


def _require_finite(value: float, where: str) -> None:
    if not math.isfinite(value):
        raise InfiniteLogProbability(
            f"{where}: log-probability {value!r}; refit with smoothing "
            "(alpha > 0) so every category has nonzero probability"
        )


def from_categorical_nb(
    clf: Any,
    feature_names: Sequence[str],
    categories: Sequence[Sequence[Any]],
    class_labels: Sequence[str] | None = None,
) -> ExportedModel:
    """Transcribe a fitted CategoricalNB and its category maps.

    ``categories`` maps each feature's integer codes to value labels;
    ``class_labels`` does the same for ``clf.classes_`` and defaults to
    their string form.  Order is preserved: class 0 in the file is
    ``clf.classes_[0]``, which is also the label both runtimes pick on a
    tied score.
    """
    fitted_classes = getattr(clf, "classes_", None)
    if fitted_classes is None:
        raise ValueError("classifier is not fitted (no classes_ attribute)")
    if len(fitted_classes) != 2:
        raise NotBinary(
            f"expected two classes, got {len(fitted_classes)}: "
            f"{list(fitted_classes)}"
        )
    if class_labels is None:
        class_labels = [str(c) for c in fitted_classes]
    if len(class_labels) != 2:
        raise NotBinary(f"expected two class labels, got {len(class_labels)}")

    if len(feature_names) != clf.n_features_in_:
        raise ValueError(
            f"{len(feature_names)} feature names for a model fitted on "
            f"{clf.n_features_in_} features"
        )
    if len(categories) != clf.n_features_in_:
        raise ValueError(
            f"{len(categories)} category maps for a model fitted on "
            f"{clf.n_features_in_} features"
        )

    log_prior = tuple(float(x) for x in clf.class_log_prior_)
    tables = []
    for name, labels, log_prob in zip(
        feature_names, categories, clf.feature_log_prob_
    ):
        # log_prob has shape (2, n_categories_i); transpose to per-value rows
        if len(labels) != log_prob.shape[1]:
            raise ValueError(
                f"feature {name!r}: category map lists {len(labels)} values "
                f"but the model stores {log_prob.shape[1]}; refit with "
                f"min_categories={len(labels)} or fix the sidecar"
            )
        tables.append(
            tuple(
                (float(log_prob[0][k]), float(log_prob[1][k]))
                for k in range(len(labels))
            )
        )
    return ExportedModel(
        classes=(str(class_labels[0]), str(class_labels[1])),
        feature_names=tuple(str(n) for n in feature_names),
        domains=tuple(tuple(str(v) for v in labels) for labels in categories),
        log_prior=log_prior,
        log_likelihood=tuple(tables),
    )


def export(
    clf: Any,
    feature_names: Sequence[str],
    categories: Sequence[Sequence[Any]],
    out_path: str | Path,
    class_labels: Sequence[str] | None = None,
) -> ExportedModel:
    """Validate, transcribe, and write the JSON file; returns the mirror."""
    model = from_categorical_nb(clf, feature_names, categories, class_labels)
    payload = json.dumps(model.to_dict(), indent=2, ensure_ascii=False)
    try:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(payload)
            handle.write("\n")
    except OSError as exc:
        raise SchemaWriteError(f"cannot write {out_path}: {exc}") from exc
    return model
