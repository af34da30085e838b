"""Random labeling baseline and its confidence-bound budget rationale."""
from __future__ import annotations

import math

from .oracle import LabeledRow, Oracle
from .tabular import Dataset, clone, d2h
from .validation import check_budget, check_dataset


def random_n(data: Dataset, oracle: Oracle, budget: int, rng) -> LabeledRow:
    """Label `budget` distinct random rows, return the d2h-minimal one."""
    check_dataset(data)
    check_budget(budget, 1, data)
    chosen = rng.sample(data.rows, budget)
    labeled = [oracle.label(row).row for row in chosen]
    frame = clone(data, labeled, order=True)
    return oracle.label(frame.rows[0])


def hamlet_n(confidence: float, p: float) -> int:
    """Labels needed to hit the best p-fraction at least once with confidence C.

    Solves (1-p)**n = 1-C for n and rounds to the nearest integer; e.g.
    catching the best 1-in-17 slice with 95% confidence takes 49 labels.
    """
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must be in (0,1), got {confidence}")
    if not 0 < p < 1:
        raise ValueError(f"p must be in (0,1), got {p}")
    return round(math.log(1 - confidence) / math.log(1 - p))


def baseline_d2h(data: Dataset) -> list[float]:
    """d2h of every row: the exhaustive all-labels reference distribution."""
    check_dataset(data)
    return [d2h(data, row) for row in data.rows]
