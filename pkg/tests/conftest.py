"""Shared fixtures: the nine-car worked example and small helpers."""
from __future__ import annotations

import pytest

from frugalopt.tabular import Dataset, Row, add_row

AUTO_HEADER = ["Clndrs", "Volume", "Model", "origin", "Lbs-", "Acc+", "Mpg+"]

# Nine cars, printed best-three-first; the canonical worked example.
NINE_CARS = [
    (4, 97, 82, "2", 2130, 24.6, 40),
    (4, 96, 72, "2", 2189, 18, 30),
    (4, 140, 74, "1", 2542, 17, 30),
    (4, 119, 78, "3", 2300, 14.7, 30),
    (8, 260, 79, "1", 3420, 22.2, 20),
    (4, 134, 78, "3", 2515, 14.8, 20),
    (6, 231, 78, "1", 3380, 15.8, 20),
    (8, 302, 77, "1", 4295, 14.9, 20),
    (8, 351, 71, "1", 4154, 13.5, 10),
]


def build_cars() -> Dataset:
    data = Dataset(AUTO_HEADER)
    for i, cells in enumerate(NINE_CARS):
        add_row(data, Row([float(c) if not isinstance(c, str) else c for c in cells],
                          ident=i))
    return data


@pytest.fixture
def cars() -> Dataset:
    return build_cars()


def make_dataset(seed: int = 0, n: int = 60) -> Dataset:
    """Small mixed-type dataset with learnable goal structure, for loop tests."""
    import random

    rng = random.Random(seed)
    data = Dataset(["Size", "Temp", "kind", "Cost-", "Gain+"])
    kinds = ["a", "b", "c"]
    for i in range(n):
        size = rng.uniform(0, 100)
        temp = rng.uniform(-10, 40)
        kind = rng.choice(kinds)
        cost = size * 2 + (10 if kind == "c" else 0) + rng.gauss(0, 5)
        gain = 100 - abs(temp - 20) * 3 + rng.gauss(0, 4)
        add_row(data, Row([size, temp, kind, cost, gain], ident=i))
    return data
