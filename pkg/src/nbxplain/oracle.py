"""Brute-force reference implementations for small problem sizes.

Everything here enumerates feature space directly and evaluates the
classifier semantics from first principles (vectorized log-joint argmax for
models, plain weight sums for quantized knapsacks).  Nothing is shared with
the dynamic-programming counter, on purpose: these functions exist to check
it.  Enumeration is capped hard; past the cap the caller gets SpaceTooLarge,
never a silent sample.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import prod
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import SpaceTooLarge
from .model import NbcModel, validate_instance
from .xlc import QuantizedKnapsack

#: Hard cap on the number of enumerated points.
ENUM_CAP = 10**6

#: Hard cap on the feature count for the exhaustive subset search.
SUBSET_CAP = 12


def _enumerate_grid(sizes: Sequence[int]) -> np.ndarray:
    """All index tuples over the given domain sizes, shape (prod(sizes), n)."""
    if not sizes:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices(sizes, dtype=np.int64)
    return grid.reshape(len(sizes), -1).T


def _completions(
    sizes: Sequence[int], fixed: dict[int, int]
) -> np.ndarray:
    """All full instances agreeing with ``fixed``, shape (N, m)."""
    free = [i for i in range(len(sizes)) if i not in fixed]
    space = prod(sizes[i] for i in free)
    if space > ENUM_CAP:
        raise SpaceTooLarge(
            f"{space} completions exceed the enumeration cap {ENUM_CAP}"
        )
    block = _enumerate_grid([sizes[i] for i in free])
    out = np.empty((block.shape[0], len(sizes)), dtype=np.int64)
    for i, value in fixed.items():
        out[:, i] = value
    out[:, free] = block
    return out


def _log_joint(model: NbcModel, points: np.ndarray) -> np.ndarray:
    """Log-joint scores per class, shape (N, 2); written independently of
    model.predict to give a second opinion on the same formula."""
    scores = np.tile(np.asarray(model.log_prior, dtype=np.float64), (points.shape[0], 1))
    for i in range(model.num_features):
        table = np.asarray(model.log_likelihood[i], dtype=np.float64)
        scores += table[points[:, i], :]
    return scores


def predictions(model: NbcModel, points: np.ndarray) -> np.ndarray:
    """Predicted class per point; ties resolve to the negative class."""
    scores = _log_joint(model, points)
    return (scores[:, 1] > scores[:, 0]).astype(np.int64)


def brute_count(qk: QuantizedKnapsack, status: Sequence[Optional[int]]) -> int:
    """Count positively-predicted consistent points by full enumeration."""
    sizes = qk.domain_sizes
    fixed = {i: v for i, v in enumerate(status) if v is not None}
    points = _completions(sizes, fixed)
    totals = np.zeros(points.shape[0], dtype=np.int64)
    for i in range(qk.num_features):
        weights = np.asarray(
            [qk.value_weight(i, k) for k in range(sizes[i])], dtype=np.int64
        )
        totals += weights[points[:, i]]
    return int(np.count_nonzero(totals < qk.rhs))


def brute_precision(
    model: NbcModel, v: Sequence[int], subset: Iterable[int]
) -> Fraction:
    """Exact precision of ``subset`` by enumerating every completion and
    evaluating the model directly (no quantization anywhere)."""
    validate_instance(model.features, v)
    fixed = {i: v[i] for i in subset}
    points = _completions(model.domain_sizes, fixed)
    target = int(predictions(model, np.asarray([v], dtype=np.int64))[0])
    hits = int(np.count_nonzero(predictions(model, points) == target))
    return Fraction(hits, points.shape[0])


def entails_prediction(
    model: NbcModel, v: Sequence[int], subset: Iterable[int]
) -> bool:
    """True iff every completion of ``subset`` keeps the prediction of ``v``."""
    return brute_precision(model, v, subset) == 1


def check_axp(model: NbcModel, v: Sequence[int], explanation: Iterable[int]) -> bool:
    """True iff ``explanation`` entails the prediction and no single feature
    can be removed without losing the entailment."""
    features = sorted(set(explanation))
    if not entails_prediction(model, v, features):
        return False
    for i in features:
        if entails_prediction(model, v, [j for j in features if j != i]):
            return False
    return True


def brute_min_paxp(
    model: NbcModel, v: Sequence[int], delta: Fraction
) -> tuple[int, ...]:
    """Smallest feature set whose exact precision reaches ``delta``.

    Searches subsets by increasing cardinality, lexicographically within each
    size, so ties resolve deterministically.
    """
    m = model.num_features
    if m > SUBSET_CAP:
        raise SpaceTooLarge(f"{m} features exceed the subset-search cap {SUBSET_CAP}")
    sizes = model.domain_sizes
    if prod(sizes) > ENUM_CAP:
        raise SpaceTooLarge(
            f"{prod(sizes)} points exceed the enumeration cap {ENUM_CAP}"
        )
    validate_instance(model.features, v)
    delta = Fraction(delta)
    points = _enumerate_grid(sizes)
    target = int(predictions(model, np.asarray([v], dtype=np.int64))[0])
    positive = predictions(model, points) == target
    for size in range(m + 1):
        for subset in itertools.combinations(range(m), size):
            mask = np.ones(points.shape[0], dtype=bool)
            for i in subset:
                mask &= points[:, i] == v[i]
            denominator = prod(sizes[i] for i in range(m) if i not in subset)
            hits = int(np.count_nonzero(positive & mask))
            if Fraction(hits, denominator) >= delta:
                return subset
    raise AssertionError("the full feature set always reaches precision 1")
