"""Exact model counting for the quantized knapsack form.

``C(k, r)`` is the number of assignments to features ``0..k`` whose shifted
integer weight sum is at most ``r``.  Free features sum over their weight
groups,

    C(k, r) = sum_g  count[k][g] * C(k-1, r - weight[k][g])

while a feature fixed to one concrete value contributes exactly that value's
weight with multiplicity one,

    C(k, r) = C(k-1, r - value_weight(k, v_k)).

The first row is the staircase of cumulative group counts, and any negative
residual counts zero.  The number of positively-predicted points consistent
with the fixed features is ``C(m-1, rhs-1)`` (weight sum strictly below
``rhs``).

The table is evaluated lazily: only residuals reachable from the queried
cell are ever computed, and two saturation cuts resolve most of them without
recursion (a residual below the smallest achievable prefix sum counts zero;
one at or above the largest achievable prefix sum counts every prefix
assignment).  Changing one feature's status invalidates the memoized rows at
and above that feature only; earlier rows are reused, since each row reads
only the row below it.

Counts are plain Python integers, so they never overflow; the product of
domain sizes can exceed 64 bits already for a few dozen features.

A ``CountTable`` mutates internal memo state and must not be shared across
threads; the quantized knapsack it reads is immutable and shareable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DomainMismatch
from .xlc import QuantizedKnapsack

#: Per-feature status: a concrete value index, or None when the feature is
#: free to range over its whole domain.
FixStatus = Sequence[Optional[int]]


class CountTable:
    """Lazily evaluated counting table over one quantized knapsack."""

    def __init__(self, qk: QuantizedKnapsack, status: FixStatus | None = None):
        self.qk = qk
        m = qk.num_features
        _validate_qk(qk)
        self._status: list[Optional[int]] = [None] * m
        self._row_weights: list[tuple[int, ...]] = list(qk.group_weights)
        self._row_counts: list[tuple[int, ...]] = list(qk.group_counts)
        self._memo: list[dict[int, int]] = [{} for _ in range(m)]
        self._prefix_min: list[int] = [0] * m
        self._prefix_max: list[int] = [0] * m
        self._prefix_full: list[int] = [0] * m
        self._recompute_prefix(0)
        self.cells_evaluated = 0
        if status is not None:
            if len(status) != m:
                raise DomainMismatch(
                    f"status has {len(status)} entries for {m} features"
                )
            for i, v in enumerate(status):
                if v is not None:
                    self.set_fixed(i, v)

    @property
    def status(self) -> tuple[Optional[int], ...]:
        return tuple(self._status)

    def set_fixed(self, feature: int, value: int) -> None:
        """Fix ``feature`` to one concrete value index."""
        qk = self.qk
        if not 0 <= value < len(qk.value_to_group[feature]):
            raise DomainMismatch(
                f"feature {feature}: value index {value} outside domain of "
                f"size {len(qk.value_to_group[feature])}"
            )
        if self._status[feature] == value:
            return
        self._status[feature] = value
        w = qk.value_weight(feature, value)
        self._row_weights[feature] = (w,)
        self._row_counts[feature] = (1,)
        self._invalidate_from(feature)

    def set_free(self, feature: int) -> None:
        """Let ``feature`` range over its whole domain again."""
        if self._status[feature] is None:
            return
        self._status[feature] = None
        self._row_weights[feature] = self.qk.group_weights[feature]
        self._row_counts[feature] = self.qk.group_counts[feature]
        self._invalidate_from(feature)

    def free_space(self) -> int:
        """Number of assignments to the free features."""
        m = self.qk.num_features
        return self._prefix_full[m - 1] if m else 1

    def count(self) -> int:
        """Positively-predicted points consistent with the fixed features."""
        m = self.qk.num_features
        r = self.qk.rhs - 1
        if m == 0:
            return 1 if r >= 0 else 0
        if r < 0:
            return 0
        return self._value(m - 1, r)

    # -- internals ---------------------------------------------------------

    def _invalidate_from(self, feature: int) -> None:
        for k in range(feature, self.qk.num_features):
            self._memo[k] = {}
        self._recompute_prefix(feature)

    def _recompute_prefix(self, start: int) -> None:
        m = self.qk.num_features
        lo = self._prefix_min[start - 1] if start else 0
        hi = self._prefix_max[start - 1] if start else 0
        full = self._prefix_full[start - 1] if start else 1
        for k in range(start, m):
            weights = self._row_weights[k]
            lo += weights[0]
            hi += weights[-1]
            full *= sum(self._row_counts[k])
            self._prefix_min[k] = lo
            self._prefix_max[k] = hi
            self._prefix_full[k] = full

    def _value(self, k: int, r: int) -> int:
        """C(k, r), computing any missing cells it depends on."""
        if r < self._prefix_min[k]:
            return 0
        if r >= self._prefix_max[k]:
            return self._prefix_full[k]
        memo = self._memo[k]
        got = memo.get(r)
        if got is None:
            self._fill(k, r)
            got = memo[r]
        return got

    def _fill(self, top_k: int, top_r: int) -> None:
        # Downward pass: collect the unresolved residuals each row needs.
        memo = self._memo
        p_min = self._prefix_min
        p_max = self._prefix_max
        needed: list[set[int]] = [set() for _ in range(top_k + 1)]
        frontier = {top_r}
        for k in range(top_k, -1, -1):
            needed[k] = frontier
            if k == 0:
                break
            nxt: set[int] = set()
            row_memo = memo[k - 1]
            lo, hi = p_min[k - 1], p_max[k - 1]
            for r in frontier:
                for w in self._row_weights[k]:
                    r2 = r - w
                    if lo <= r2 < hi and r2 not in row_memo:
                        nxt.add(r2)
            frontier = nxt
            if not frontier:
                break

        # Upward sweep: rows depend only on the row below.
        base_weights = self._row_weights[0]
        base_counts = self._row_counts[0]
        for r in needed[0]:
            total = 0
            for w, n in zip(base_weights, base_counts):
                if w <= r:
                    total += n
            memo[0][r] = total
        self.cells_evaluated += len(needed[0])
        for k in range(1, top_k + 1):
            if not needed[k]:
                continue
            row_memo = memo[k]
            below = memo[k - 1]
            lo, hi = p_min[k - 1], p_max[k - 1]
            full = self._prefix_full[k - 1]
            weights = self._row_weights[k]
            counts = self._row_counts[k]
            for r in needed[k]:
                total = 0
                for w, n in zip(weights, counts):
                    r2 = r - w
                    if r2 < lo:
                        continue
                    if r2 >= hi:
                        total += n * full
                    else:
                        total += n * below[r2]
                row_memo[r] = total
            self.cells_evaluated += len(needed[k])


def _validate_qk(qk: QuantizedKnapsack) -> None:
    for i in range(qk.num_features):
        weights = qk.group_weights[i]
        counts = qk.group_counts[i]
        if len(weights) != len(counts) or not weights:
            raise ValueError(f"feature {i}: malformed weight groups")
        if any(w < 1 for w in weights):
            raise ValueError(f"feature {i}: group weights must be >= 1")
        if any(b <= a for a, b in zip(weights, weights[1:])):
            raise ValueError(f"feature {i}: group weights must strictly increase")
        if any(n < 1 for n in counts):
            raise ValueError(f"feature {i}: group multiplicities must be >= 1")
        histogram = [0] * len(weights)
        for g in qk.value_to_group[i]:
            if not 0 <= g < len(weights):
                raise ValueError(f"feature {i}: value maps to missing group {g}")
            histogram[g] += 1
        if tuple(histogram) != tuple(counts):
            raise ValueError(
                f"feature {i}: group multiplicities disagree with value mapping"
            )


def _check_status(qk: QuantizedKnapsack, status: FixStatus) -> None:
    if len(status) != qk.num_features:
        raise DomainMismatch(
            f"status has {len(status)} entries for {qk.num_features} features"
        )
    for i, v in enumerate(status):
        if v is not None and not 0 <= v < len(qk.value_to_group[i]):
            raise DomainMismatch(
                f"feature {i}: value index {v} outside domain of size "
                f"{len(qk.value_to_group[i])}"
            )


def count_models(qk: QuantizedKnapsack, status: FixStatus) -> int:
    """Points predicted positive by the quantized classifier and consistent
    with every fixed feature."""
    _check_status(qk, status)
    return CountTable(qk, status).count()


def count_complement(qk: QuantizedKnapsack, status: FixStatus) -> int:
    """Consistent points predicted negative: free-space size minus the count."""
    _check_status(qk, status)
    table = CountTable(qk, status)
    return table.free_space() - table.count()


def precision(
    qk: QuantizedKnapsack, v: Sequence[int], subset: Iterable[int]
) -> Fraction:
    """Exact conditional probability that fixing ``subset`` at ``v`` keeps the
    positive prediction, as a rational (no floating division)."""
    sizes = qk.domain_sizes
    if len(v) != len(sizes):
        raise DomainMismatch(
            f"instance has {len(v)} values, knapsack has {len(sizes)} features"
        )
    for i, value in enumerate(v):
        if not 0 <= value < sizes[i]:
            raise DomainMismatch(
                f"feature {i}: value index {value} outside domain of size {sizes[i]}"
            )
    fixed = set()
    for i in subset:
        if not 0 <= i < len(sizes):
            raise DomainMismatch(f"feature index {i} out of range")
        fixed.add(i)
    status: list[Optional[int]] = [v[i] if i in fixed else None for i in range(len(sizes))]
    table = CountTable(qk, status)
    return Fraction(table.count(), table.free_space())
