"""Probabilistic abductive explanations via deletion-based trimming.

A feature set S is a weak probabilistic explanation at threshold delta if
the exact precision (fraction of completions keeping the positive
prediction) is at least delta.  Starting from an abductive explanation as
seed, the trimming loop visits the seed's features in a caller-chosen order
and drops each one whose removal keeps the precision at or above delta; the
result is a subset of the seed from which no visited feature can be removed.

All threshold comparisons happen in exact rational arithmetic: counts are
integers, precision is a Fraction, and delta itself is parsed from a decimal
string so that e.g. 0.95 means exactly 19/20.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .axp import FeatureSet, as_feature_set, compute_axp
from .counting import CountTable, precision
from .errors import DomainMismatch, SeedNotWeakPAXp
from .model import NbcModel, validate_instance
from .xlc import QuantizedKnapsack, orient, quantize, reduce_model, slack


@dataclass(frozen=True)
class Explanation:
    """One explanation record.

    ``kind`` is "AXp" when the seed itself was returned untrimmed (precision
    exactly 1 by construction) and "ApproxPAXp" after trimming.  ``elapsed``
    is the trimming wall time in seconds; untrimmed explanations report 0.
    """

    kind: str
    features: FeatureSet
    precision: Fraction
    delta: Fraction
    seed: FeatureSet
    elapsed: float

    def __post_init__(self) -> None:
        if self.kind not in ("AXp", "ApproxPAXp"):
            raise ValueError(f"unknown explanation kind {self.kind!r}")
        if self.kind == "AXp" and self.precision != 1:
            raise ValueError("an untrimmed abductive explanation has precision 1")
        if not set(self.features) <= set(self.seed):
            raise ValueError("explanation features must be a subset of the seed")


def as_delta(value: Fraction | str | int | float) -> Fraction:
    """Coerce a threshold into an exact rational in (0, 1].

    Strings parse as decimals ("0.95" -> 19/20).  Floats go through their
    shortest decimal repr first, so 0.95 also means exactly 19/20 rather
    than its binary approximation.
    """
    if isinstance(value, float):
        value = str(value)
    delta = Fraction(value)
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return delta


def is_weak_paxp(
    qk: QuantizedKnapsack,
    v: Sequence[int],
    subset: Iterable[int],
    delta: Fraction | str | int | float,
) -> bool:
    """True iff fixing ``subset`` at ``v`` keeps precision >= delta, compared
    exactly in rationals."""
    return precision(qk, v, subset) >= as_delta(delta)


def approx_paxp(
    qk: QuantizedKnapsack,
    v: Sequence[int],
    delta: Fraction | str | int | float,
    seed: Iterable[int],
    order: Sequence[int] | None = None,
    reuse_table: bool = True,
) -> FeatureSet:
    """Trim ``seed`` by single-feature deletion in the given traversal order.

    ``order`` must be a permutation of the seed; it defaults to ascending
    feature index.  With ``reuse_table`` (the default) one counting table is
    kept across iterations, so toggling a feature's status only invalidates
    the table rows at and above it; a fresh-table mode exists for
    differential testing.

    Returns S with precision(S) >= delta and, for every feature kept, the
    precision of S minus that feature below delta at the moment it was
    visited.  Features outside the seed stay free throughout.
    """
    delta = as_delta(delta)
    m = qk.num_features
    seed = as_feature_set(seed, m)
    if order is None:
        order = seed
    else:
        order = tuple(order)
        if sorted(order) != list(seed):
            raise ValueError("traversal order must be a permutation of the seed")
    if len(v) != m:
        raise DomainMismatch(f"instance has {len(v)} values for {m} features")

    table = CountTable(qk, [v[i] if i in set(seed) else None for i in range(m)])
    if Fraction(table.count(), table.free_space()) < delta:
        raise SeedNotWeakPAXp(
            f"seed {seed} has precision below {delta}; it cannot anchor trimming"
        )

    kept = set(seed)
    for i in order:
        if reuse_table:
            table.set_free(i)
            candidate = table
        else:
            candidate = CountTable(
                qk, [v[j] if j in kept and j != i else None for j in range(m)]
            )
        if Fraction(candidate.count(), candidate.free_space()) >= delta:
            kept.discard(i)
        elif reuse_table:
            table.set_fixed(i, v[i])
    return tuple(sorted(kept))


def explain(
    model: NbcModel,
    v: Sequence[int],
    delta: Fraction | str | int | float,
    target_size: int,
    decimals: int = 3,
    order: str = "delta",
    reuse_table: bool = True,
) -> Explanation:
    """Full pipeline: explain the model's prediction for ``v``.

    Computes the abductive explanation of the (suitably oriented) linear
    reduction; if it already fits within ``target_size`` features it is
    returned as-is with precision exactly 1 and no trimming cost.  Otherwise
    the classifier is quantized at ``decimals`` places and the explanation is
    trimmed down under the ``delta`` precision threshold.

    ``order`` selects the trimming traversal: "delta" visits features by
    increasing slack drop (dropping the least influential first, which tends
    to shrink the result most), "lex" by ascending index.
    """
    delta = as_delta(delta)
    if target_size < 1:
        raise ValueError(f"target size must be positive, got {target_size}")
    if order not in ("delta", "lex"):
        raise ValueError(f"unknown traversal order {order!r}")
    validate_instance(model.features, v)

    oriented, explained_class = orient(reduce_model(model), v)
    profile = slack(oriented, v)
    axp = compute_axp(profile)
    if len(axp) <= target_size:
        return Explanation(
            kind="AXp",
            features=axp,
            precision=Fraction(1),
            delta=delta,
            seed=axp,
            elapsed=0.0,
        )

    qk = quantize(oriented, decimals, target_class=explained_class)
    if order == "delta":
        traversal = tuple(sorted(axp, key=lambda i: (profile.deltas[i], i)))
    else:
        traversal = axp
    start = time.perf_counter()
    trimmed = approx_paxp(qk, v, delta, axp, traversal, reuse_table=reuse_table)
    elapsed = time.perf_counter() - start
    return Explanation(
        kind="ApproxPAXp",
        features=trimmed,
        precision=precision(qk, v, trimmed),
        delta=delta,
        seed=axp,
        elapsed=elapsed,
    )
