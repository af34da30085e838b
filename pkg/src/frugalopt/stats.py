"""Statistical ranking of repeated treatment outcomes.

A treatment is one optimizer configuration (name plus label budget) with the
outcome value it achieved on each repeat.  Treatments are sorted by mean
outcome and recursively partitioned: each candidate cut maximizes the
expected mean deviation

    E(delta) = (len(c1)*|mean(c1)-mean(c)| + len(c2)*|mean(c2)-mean(c)|) / len(c)

over the pooled values, and a cut is kept only when the two sides differ by
more than a small Cliff's-delta effect.  Treatments sharing a final group are
statistically indistinguishable; groups are numbered 0 (best) upward.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean, median
from typing import Sequence

#: Effect sizes below this are "small": too weak to justify a cut.
CLIFFS_SMALL = 0.147


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> float:
    """Exact pairwise Cliff's delta: (#(x>y) - #(x<y)) / (len(a)*len(b))."""
    if not a or not b:
        raise ValueError("cliffs_delta needs two non-empty value lists")
    greater = sum(1 for x in a for y in b if x > y)
    lesser = sum(1 for x in a for y in b if x < y)
    return (greater - lesser) / (len(a) * len(b))


def is_different(a: Sequence[float], b: Sequence[float]) -> bool:
    """True when the two samples differ by more than a small effect."""
    return abs(cliffs_delta(a, b)) >= CLIFFS_SMALL


def percentiles(values: Sequence[float]) -> tuple[float, float, float]:
    """Nearest-rank 25th, 50th, and 75th percentiles."""
    if not values:
        raise ValueError("percentiles of an empty sequence are undefined")
    ordered = sorted(values)
    n = len(ordered)

    def nearest(p: float) -> float:
        return ordered[max(0, math.ceil(p * n) - 1)]

    return nearest(0.25), nearest(0.50), nearest(0.75)


@dataclass(frozen=True)
class Treatment:
    """One optimizer configuration and its outcome value per repeat."""

    name: str
    budget: int
    results: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "results", tuple(float(v) for v in self.results))
        if not self.results:
            raise ValueError(f"treatment {self.name!r} has no results")
        for v in self.results:
            if not 0.0 <= v <= 1.0:
                raise ValueError(
                    f"treatment {self.name!r} result {v!r} is outside [0, 1]")

    @property
    def label(self) -> str:
        return f"{self.name}&{self.budget}"

    @property
    def mean(self) -> float:
        return fmean(self.results)


@dataclass(frozen=True)
class RankedTreatment:
    """A treatment placed in its statistical rank group (0 = best)."""

    treatment: Treatment
    rank: int
    median: float
    spread: float  # 75th minus 25th percentile


def _best_split(pools: Sequence[Sequence[float]]) -> int | None:
    """Index cutting ``pools`` into the two sides maximizing E(delta).

    Values are pooled per side; the first maximum wins.  None when there is
    nothing to cut.
    """
    if len(pools) < 2:
        return None
    sums = [sum(p) for p in pools]
    counts = [len(p) for p in pools]
    total, n = sum(sums), sum(counts)
    mean_all = total / n
    best_index, best_e = None, -1.0
    left_sum, left_n = 0.0, 0
    for i in range(1, len(pools)):
        left_sum += sums[i - 1]
        left_n += counts[i - 1]
        right_sum, right_n = total - left_sum, n - left_n
        e = (left_n * abs(left_sum / left_n - mean_all)
             + right_n * abs(right_sum / right_n - mean_all)) / n
        if e > best_e:
            best_index, best_e = i, e
    return best_index


def scott_knott(treatments: Sequence[Treatment]) -> list[RankedTreatment]:
    """Rank treatments into groups of statistically indistinguishable results.

    Returns one RankedTreatment per input, ordered by (mean, median) of the
    results; ranks are contiguous integers starting at 0 for the best group.
    """
    if not treatments:
        raise ValueError("scott_knott needs at least one treatment")
    order = sorted(treatments, key=lambda t: (t.mean, median(t.results)))

    groups: list[list[Treatment]] = []

    def cut(chunk: list[Treatment]) -> None:
        i = _best_split([t.results for t in chunk])
        if i is not None:
            left, right = chunk[:i], chunk[i:]
            left_vals = [v for t in left for v in t.results]
            right_vals = [v for t in right for v in t.results]
            if is_different(left_vals, right_vals):
                cut(left)
                cut(right)
                return
        groups.append(chunk)

    cut(list(order))

    ranked = []
    for rank, chunk in enumerate(groups):
        for t in chunk:
            p25, p50, p75 = percentiles(t.results)
            ranked.append(RankedTreatment(t, rank, p50, p75 - p25))
    return ranked
