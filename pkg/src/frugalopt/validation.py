"""Input checks shared by the estimators, the harness, and the service.

Each helper raises ValueError with a message naming the offending argument,
so callers can surface the text directly to users.
"""
from __future__ import annotations

from .tabular import Dataset, Row, is_labeled


def check_dataset(data: Dataset, min_rows: int = 1, need_x: bool = True,
                  need_y: bool = True) -> Dataset:
    """Reject datasets too small or too column-poor for an algorithm."""
    if not isinstance(data, Dataset):
        raise ValueError(f"expected a Dataset, got {type(data).__name__}")
    if need_x and not data.x:
        raise ValueError("dataset has no independent columns")
    if need_y and not data.y:
        raise ValueError("dataset has no goal columns")
    if len(data.rows) < min_rows:
        raise ValueError(f"dataset has {len(data.rows)} rows, need at least {min_rows}")
    return data


def check_row(data: Dataset, row: Row) -> Row:
    """Reject rows whose arity does not match the dataset header."""
    if len(row.cells) != len(data.names):
        raise ValueError(f"row has {len(row.cells)} cells, header has {len(data.names)}")
    return row


def check_labeled(data: Dataset, row: Row) -> Row:
    """Reject rows with any missing goal cell."""
    check_row(data, row)
    if not is_labeled(data, row):
        raise ValueError(f"row {row.ident} is not labeled on every goal column")
    return row


def check_budget(budget: int, low: int, data: Dataset) -> int:
    """Reject label budgets outside [low, number of rows]."""
    if not isinstance(budget, int) or isinstance(budget, bool):
        raise ValueError(f"budget must be an integer, got {budget!r}")
    if budget < low:
        raise ValueError(f"budget must be at least {low}, got {budget}")
    if budget > len(data.rows):
        raise ValueError(f"budget {budget} exceeds the {len(data.rows)} available rows")
    return budget
