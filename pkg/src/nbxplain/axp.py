"""Abductive explanations of an XLC instance.

A feature set S entails the prediction iff the worst completion of the free
features still has a positive margin, i.e. ``-phi + sum_{i in S} deltas[i] > 0``.
Because every feature costs the same, a cardinality-minimal entailing set is
the shortest prefix of the features sorted by slack drop (delta) in
descending order whose drops sum past phi; that prefix is also
subset-minimal, since dropping any member removes at least as much as the
last (smallest) one.
"""

from __future__ import annotations

from typing import Iterable

from .errors import NotPredictedPositive
from .xlc import SlackProfile

FeatureSet = tuple[int, ...]


def as_feature_set(indices: Iterable[int], num_features: int) -> FeatureSet:
    """Normalize to a sorted duplicate-free tuple, range-checked."""
    unique = sorted(set(indices))
    for i in unique:
        if not 0 <= i < num_features:
            raise ValueError(f"feature index {i} out of range [0, {num_features})")
    return tuple(unique)


def is_weak_axp(profile: SlackProfile, subset: Iterable[int]) -> bool:
    """True iff fixing ``subset`` entails the prediction for all completions."""
    s = as_feature_set(subset, len(profile.deltas))
    return -profile.phi + sum(profile.deltas[i] for i in s) > 0


def compute_axp(profile: SlackProfile) -> FeatureSet:
    """Cardinality- and subset-minimal entailing feature set.

    Features are taken in descending delta order, ties broken by ascending
    index for determinism, until the running delta sum exceeds phi.
    """
    if not profile.gamma > 0:
        raise NotPredictedPositive(
            f"slack gamma = {profile.gamma} is not positive; orient the "
            "classifier towards the predicted class first"
        )
    order = sorted(range(len(profile.deltas)), key=lambda i: (-profile.deltas[i], i))
    chosen: list[int] = []
    running = 0.0
    for i in order:
        if running > profile.phi:
            break
        chosen.append(i)
        running += profile.deltas[i]
    if not running > profile.phi and chosen:
        # Exhausted every feature without passing phi: cannot happen when
        # gamma > 0 because the full sum equals gamma + phi.
        raise NotPredictedPositive("slack profile is inconsistent")
    return tuple(sorted(chosen))
