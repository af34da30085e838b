"""Recursive bi-clustering that pays for two labels per level, at most.

Find two distant rows over the independent attributes, label only those
two, keep the half of the rows nearest the better one, and recurse until
fewer than 2 * n**stop rows survive.  The better endpoint is carried into
the next level, so after the root each level needs just one new label.

Distance comparisons between endpoints use a d2h frame built from the rows
labeled so far in the run; unlabeled goal cells are never read, not even
for normalization.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .config import Config
from .oracle import LabeledRow, Oracle
from .tabular import Dataset, Row, clone, d2h, dist_row
from .validation import check_dataset

_DEFAULT = Config()
_DEGENERATE_C = 1e-12   # below this the endpoints coincide


@dataclass
class SwayResult:
    """Outcome of one bi-clustering run."""

    best_leaf: list[Row]
    rest: list[Row]
    labels_used: int
    last_best: Optional[Row] = None


def near(data: Dataset, row: Row, rows: Sequence[Row]) -> list[Row]:
    """Rows sorted by distance from `row`; ties keep their input order."""
    return sorted(rows, key=lambda other: dist_row(data, row, other))


def _endpoint_frame(data: Dataset, frame_rows: Sequence[Row],
                    left: Row, right: Row) -> Dataset:
    """d2h frame over the labeled rows seen so far plus the two endpoints."""
    pool = {r.ident: r for r in frame_rows}
    pool[left.ident] = left
    pool[right.ident] = right
    return clone(data, list(pool.values()))


def faraway(data: Dataset, rows: Sequence[Row], sortp: bool,
            last: Optional[Row], oracle: Oracle, rng,
            cfg: Config = _DEFAULT,
            frame_rows: Sequence[Row] = ()) -> tuple[Row, Row]:
    """Two distant rows; with sortp, both are labeled and d2h-ordered.

    The far rank is min(floor(len * far), len - 1): nearly the farthest row,
    dodging outliers at the very end of the distance list.  `last` short-cuts
    the left endpoint so deeper recursion levels reuse a paid-for label.
    """
    if len(rows) < 2:
        raise ValueError(f"need at least 2 rows, got {len(rows)}")
    rank = min(int(len(rows) * cfg.far), len(rows) - 1)
    left = last if last is not None else near(data, rng.choice(rows), rows)[rank]
    right = near(data, left, rows)[rank]
    if not sortp:
        return left, right
    left = oracle.label(left).row
    right = oracle.label(right).row
    frame = _endpoint_frame(data, frame_rows, left, right)
    if d2h(frame, right) < d2h(frame, left):
        left, right = right, left
    return left, right


def half(data: Dataset, rows: Sequence[Row], sortp: bool,
         last: Optional[Row], oracle: Oracle, rng,
         cfg: Config = _DEFAULT,
         frame_rows: Sequence[Row] = ()) -> tuple[list[Row], list[Row], Row]:
    """Split rows at the median of their projections onto a left-right axis.

    Endpoints come from a sample of at most cfg.half rows; every row is then
    projected onto the line through them by the cosine rule and split at the
    median rank, lefts getting the extra row when the count is odd.
    """
    if len(rows) < 4:
        raise ValueError(f"need at least 4 rows to split, got {len(rows)}")
    sample = list(rows) if len(rows) <= cfg.half else rng.choices(rows, k=cfg.half)
    left, right = faraway(data, sample, sortp, last, oracle, rng, cfg, frame_rows)
    big_c = dist_row(data, left, right)
    if big_c < _DEGENERATE_C:
        # endpoints coincide; projection is undefined, split by current order
        mid = math.ceil(len(rows) / 2)
        return list(rows[:mid]), list(rows[mid:]), left

    def projection(row: Row) -> float:
        a = dist_row(data, row, left)
        b = dist_row(data, row, right)
        return (a * a + big_c * big_c - b * b) / (2 * big_c)

    ordered = sorted(rows, key=projection)
    midpoint = len(rows) / 2
    lefts = [row for index, row in enumerate(ordered) if index < midpoint]
    rights = [row for index, row in enumerate(ordered) if index >= midpoint]
    return lefts, rights, left


def sway_run(data: Dataset, oracle: Oracle, rng, cfg: Config = _DEFAULT) -> SwayResult:
    """Recurse toward the best half until fewer than 2 * n**stop rows remain.

    The stop threshold is fixed once from the initial row count.  Pruned
    halves pile up in `rest`; the surviving rows are the best leaf.
    """
    check_dataset(data, min_rows=4)
    rows = list(data.rows)
    stop = 2 * len(rows) ** cfg.stop
    before = oracle.label_count
    rest: list[Row] = []
    last: Optional[Row] = None
    while len(rows) > stop and len(rows) >= 4:
        frame_rows = [lr.row for lr in oracle.labeled_rows()]
        lefts, rights, left = half(data, rows, True, last, oracle, rng, cfg, frame_rows)
        rest.extend(rights)
        rows = lefts
        last = left
    return SwayResult(best_leaf=rows, rest=rest,
                      labels_used=oracle.label_count - before,
                      last_best=last)


def sway_best(result: SwayResult, oracle: Oracle, rng=None) -> LabeledRow:
    """The best endpoint of the run, labeled.

    A run that never recursed has no endpoint; then one random leaf row is
    labeled instead (the returned row must always carry goal values).
    """
    if result.last_best is not None:
        return oracle.label(result.last_best)
    rng = rng if rng is not None else random.Random(0)
    return oracle.label(rng.choice(result.best_leaf))
