"""Reduction of a binary NBC to an extended linear classifier.

The extended linear classifier (XLC) carries one real weight per feature
value plus a bias; the decision margin of an instance is

    nu(x) = bias + sum_i weights[i][x_i]

and the positive class is predicted iff nu(x) > 0.  For a binary NBC the
reduction sets ``bias`` to the difference of class log-priors and each value
weight to the difference of class log-likelihoods, so the margin's sign
reproduces the NBC's argmax decision exactly.

Explanation machinery works "under the positive class": instances predicted
negative are handled by negating the whole classifier (`orient`), which swaps
the two classes' roles.

Slack quantities for an instance ``a`` with nu(a) > 0:

    gamma    = nu(a)                                 (the slack itself)
    worst[i] = min_k weights[i][k]                   (worst-case value weight)
    deltas[i] = weights[i][a_i] - worst[i]           (drop to worst case)
    phi      = sum_i deltas[i] - gamma               (= -worst-case margin)

Fixing a feature set S and letting the rest roam, the worst reachable margin
is ``-phi + sum_{i in S} deltas[i]``; S entails the prediction iff that is
strictly positive.

`quantize` converts the margin test into an integer knapsack counting form:
scale weights by 10^decimals, round, negate (so "margin > 0" becomes "weight
sum below a bound"), then shift every weight by a common offset to make all
of them >= 1.  Counting assignments whose shifted weight sum is strictly
below the shifted right-hand side counts exactly the points the quantized
classifier predicts positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainMismatch, ScaleOverflow
from .model import POS, NbcModel, validate_instance

#: Largest supported right-hand side of the quantized counting form.  Beyond
#: this the counting table would not fit in time or memory anyway.
MAX_RHS = 50_000_000


@dataclass(frozen=True)
class Xlc:
    """Extended linear classifier: a bias and one weight per feature value."""

    bias: float
    weights: tuple[tuple[float, ...], ...]

    @property
    def num_features(self) -> int:
        return len(self.weights)

    @property
    def domain_sizes(self) -> tuple[int, ...]:
        return tuple(len(w) for w in self.weights)


@dataclass(frozen=True)
class SlackProfile:
    """Slack quantities of one positively-predicted instance."""

    gamma: float
    deltas: tuple[float, ...]
    phi: float
    worst: tuple[float, ...]


@dataclass(frozen=True)
class QuantizedKnapsack:
    """Integer counting form of a quantized XLC.

    Per feature, ``group_weights`` holds the distinct shifted integer weights
    in strictly increasing order and ``group_counts`` their multiplicities;
    ``value_to_group`` maps each original value index to its weight group.
    An assignment is counted iff its weight sum is strictly below ``rhs``,
    which happens iff the quantized classifier predicts ``target_class``.
    ``scale`` (10^decimals) and ``offset`` record how real weights map to
    integers: shifted = round(-w * scale) + offset.
    """

    group_weights: tuple[tuple[int, ...], ...]
    group_counts: tuple[tuple[int, ...], ...]
    value_to_group: tuple[tuple[int, ...], ...]
    rhs: int
    scale: int
    offset: int
    target_class: int

    @property
    def num_features(self) -> int:
        return len(self.group_weights)

    @property
    def domain_sizes(self) -> tuple[int, ...]:
        return tuple(len(v2g) for v2g in self.value_to_group)

    def value_weight(self, feature: int, value: int) -> int:
        """Shifted integer weight of one feature value."""
        return self.group_weights[feature][self.value_to_group[feature][value]]


def reduce_model(model: NbcModel) -> Xlc:
    """Build the XLC whose margin sign reproduces the model's prediction."""
    bias = model.log_prior[1] - model.log_prior[0]
    weights = tuple(
        tuple(row[1] - row[0] for row in table) for table in model.log_likelihood
    )
    return Xlc(bias=bias, weights=weights)


def nu(xlc: Xlc, x: Sequence[int]) -> float:
    """Decision margin of ``x``; positive class iff > 0."""
    _validate(xlc, x)
    return xlc.bias + sum(xlc.weights[i][v] for i, v in enumerate(x))


def negated(xlc: Xlc) -> Xlc:
    """The same classifier with both classes' roles swapped."""
    return Xlc(
        bias=-xlc.bias,
        weights=tuple(tuple(-w for w in row) for row in xlc.weights),
    )


def orient(xlc: Xlc, x: Sequence[int]) -> tuple[Xlc, int]:
    """Return (classifier, class index) with ``x`` on the positive side.

    If ``x`` is predicted negative the classifier is negated so that all
    downstream slack and counting machinery can assume a positive margin.
    """
    if nu(xlc, x) > 0:
        return xlc, POS
    return negated(xlc), 1 - POS


def slack(xlc: Xlc, a: Sequence[int]) -> SlackProfile:
    """Slack quantities of ``a``; meaningful for explanation when nu(a) > 0."""
    _validate(xlc, a)
    worst = tuple(min(row) for row in xlc.weights)
    gamma = nu(xlc, a)
    deltas = tuple(
        xlc.weights[i][v] - worst[i] for i, v in enumerate(a)
    )
    phi = sum(deltas) - gamma
    return SlackProfile(gamma=gamma, deltas=deltas, phi=phi, worst=worst)


def _round_half_away(value: float) -> int:
    # Deterministic rounding: halves move away from zero, symmetrically for
    # positive and negative weights.
    return int(math.copysign(math.floor(abs(value) + 0.5), value))


def quantize(xlc: Xlc, decimals: int = 3, target_class: int = POS) -> QuantizedKnapsack:
    """Quantize an XLC into the integer knapsack counting form.

    ``decimals`` is the number of decimal places kept when scaling the real
    weights to integers; must lie in [0, 6].  The caller is responsible for
    orienting the classifier first so that ``target_class`` is the class on
    the positive side of the margin.
    """
    if not 0 <= decimals <= 6:
        raise ValueError(f"decimals must be in [0, 6], got {decimals}")
    scale = 10**decimals
    neg_scaled = [
        [_round_half_away(-w * scale) for w in row] for row in xlc.weights
    ]
    bound = _round_half_away(xlc.bias * scale)
    offset = 1 - min(u for row in neg_scaled for u in row)
    rhs = bound + xlc.num_features * offset
    if rhs > MAX_RHS:
        raise ScaleOverflow(
            f"quantized right-hand side {rhs} exceeds the supported maximum "
            f"{MAX_RHS}; reduce decimals"
        )

    group_weights = []
    group_counts = []
    value_to_group = []
    for row in neg_scaled:
        shifted = [u + offset for u in row]
        distinct = sorted(set(shifted))
        index_of = {w: g for g, w in enumerate(distinct)}
        counts = [0] * len(distinct)
        mapping = []
        for w in shifted:
            g = index_of[w]
            counts[g] += 1
            mapping.append(g)
        group_weights.append(tuple(distinct))
        group_counts.append(tuple(counts))
        value_to_group.append(tuple(mapping))

    return QuantizedKnapsack(
        group_weights=tuple(group_weights),
        group_counts=tuple(group_counts),
        value_to_group=tuple(value_to_group),
        rhs=rhs,
        scale=scale,
        offset=offset,
        target_class=target_class,
    )


def quantized_weight_sum(qk: QuantizedKnapsack, x: Sequence[int]) -> int:
    """Shifted integer weight sum of ``x``; positive prediction iff < rhs."""
    if len(x) != qk.num_features:
        raise DomainMismatch(
            f"instance has {len(x)} values, knapsack has {qk.num_features} features"
        )
    total = 0
    for i, v in enumerate(x):
        if not 0 <= v < len(qk.value_to_group[i]):
            raise DomainMismatch(
                f"feature {i}: value index {v} outside domain of size "
                f"{len(qk.value_to_group[i])}"
            )
        total += qk.value_weight(i, v)
    return total


def decision_disagreements(
    xlc: Xlc, qk: QuantizedKnapsack, instances: Iterable[Sequence[int]]
) -> list[tuple[tuple[int, ...], float]]:
    """Instances where the quantized decision differs from the real margin.

    Disagreements can only occur within the rounding band
    |nu(x)| < (m + 1) / (2 * scale); they are returned (instance, margin)
    so callers can report rather than silently absorb them.
    """
    out = []
    for x in instances:
        margin = nu(xlc, x)
        real_positive = margin > 0
        quant_positive = quantized_weight_sum(qk, x) < qk.rhs
        if real_positive != quant_positive:
            out.append((tuple(x), margin))
    return out


def _validate(xlc: Xlc, x: Sequence[int]) -> None:
    if len(x) != xlc.num_features:
        raise DomainMismatch(
            f"instance has {len(x)} values, classifier has {xlc.num_features} features"
        )
    for i, v in enumerate(x):
        if not 0 <= v < len(xlc.weights[i]):
            raise DomainMismatch(
                f"feature {i}: value index {v} outside domain of size "
                f"{len(xlc.weights[i])}"
            )
