"""Tabular examples with column summaries, distances, and likelihoods.

Column kind and role are read straight off the header text: a name starting
with an upper-case letter is numeric, and a trailing "+" or "-" marks a goal
to maximize or minimize.  Everything else is an independent attribute.  The
missing-value token in files is "?"; in memory a missing cell is None.

The functions here are the vocabulary every algorithm in this package is
built from: normalization, mixed-type row distance, distance-to-heaven over
the goal columns, and the naive Bayes likelihood of a row under a class.
"""
from __future__ import annotations

import csv
import math
import warnings
from typing import Iterable, Sequence, Union

MISSING = None

Cell = Union[float, str, None]

_EPS = 1e-64            # guards sd = 0 in the gaussian density
_TINY = 1e-32           # below this, a numeric range counts as degenerate
_SQRT_2PI = math.sqrt(2 * math.pi)


class Row:
    """One example: a tuple of cells plus a stable identity.

    The identity is what labeling oracles key on, so two physically equal
    rows loaded from different file positions stay distinct.
    """

    __slots__ = ("cells", "ident")

    def __init__(self, cells: Iterable[Cell], ident: int = -1):
        self.cells = tuple(cells)
        self.ident = ident

    def __repr__(self) -> str:
        return f"Row({list(self.cells)!r}, ident={self.ident})"


class NumSummary:
    """Running statistics for one numeric column.

    Mean and variance update incrementally (Welford), so summaries can be
    built in one pass and stay stable when rows arrive in any order.
    """

    __slots__ = ("name", "position", "heaven", "n", "mu", "_m2", "lo", "hi")
    is_num = True

    def __init__(self, name: str, position: int, heaven: float = 0.0):
        self.name = name
        self.position = position
        self.heaven = heaven
        self.n = 0
        self.mu = 0.0
        self._m2 = 0.0
        self.lo = math.inf
        self.hi = -math.inf

    def add(self, v: float) -> None:
        self.n += 1
        delta = v - self.mu
        self.mu += delta / self.n
        self._m2 += delta * (v - self.mu)
        if v < self.lo:
            self.lo = v
        if v > self.hi:
            self.hi = v

    @property
    def sd(self) -> float:
        if self.n < 2:
            return 0.0
        return math.sqrt(max(0.0, self._m2 / (self.n - 1)))


class SymSummary:
    """Value counts for one symbolic column."""

    __slots__ = ("name", "position", "n", "counts")
    is_num = False

    def __init__(self, name: str, position: int):
        self.name = name
        self.position = position
        self.n = 0
        self.counts: dict[str, int] = {}

    def add(self, v: str) -> None:
        self.n += 1
        self.counts[v] = self.counts.get(v, 0) + 1


ColumnSummary = Union[NumSummary, SymSummary]


def parse_header(names: Sequence[str]) -> tuple[list[ColumnSummary], list[NumSummary]]:
    """Split header names into independent-column and goal-column summaries."""
    if not names:
        raise ValueError("empty header")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate column names in header: {names}")
    x: list[ColumnSummary] = []
    y: list[NumSummary] = []
    for position, name in enumerate(names):
        is_goal = name.endswith(("+", "-"))
        is_num = name[:1].isupper()
        if is_goal and not is_num:
            raise ValueError(f"goal column {name!r} must be numeric (upper-case name)")
        if is_goal:
            heaven = 1.0 if name.endswith("+") else 0.0
            y.append(NumSummary(name, position, heaven))
        elif is_num:
            x.append(NumSummary(name, position))
        else:
            x.append(SymSummary(name, position))
    return x, y


class Dataset:
    """Rows plus the column summaries built from exactly those rows."""

    def __init__(self, names: Sequence[str]):
        self.names = list(names)
        self.x, self.y = parse_header(self.names)
        self.cols: list[ColumnSummary] = sorted(self.x + self.y, key=lambda c: c.position)
        self.rows: list[Row] = []

    def __len__(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        return f"Dataset({len(self.names)} cols, {len(self.rows)} rows)"


def add_row(data: Dataset, row: Row) -> Dataset:
    """Append a row, folding its non-missing cells into the summaries."""
    if len(row.cells) != len(data.names):
        raise ValueError(f"row has {len(row.cells)} cells, header has {len(data.names)}")
    for col in data.cols:
        v = row.cells[col.position]
        if v is not MISSING:
            col.add(v)
    data.rows.append(row)
    return data


def clone(data: Dataset, rows: Iterable[Row] = (), order: bool = False) -> Dataset:
    """New Dataset with the same header, summarizing only the given rows.

    With order=True the rows are sorted ascending by their distance to
    heaven, computed against the clone's own summaries; ties keep their
    input order.  Ordering requires every row to be labeled.
    """
    out = Dataset(data.names)
    for row in rows:
        add_row(out, row)
    if order:
        out.rows.sort(key=lambda r: d2h(out, r))
    return out


def norm(col: NumSummary, v: float) -> float:
    """Map v onto [0,1] using the column's observed lo..hi range.

    A degenerate range maps everything to 0; values outside lo..hi (possible
    when the summary was built from a subset of rows) clamp to the range.
    """
    span = col.hi - col.lo
    if span < _TINY:
        return 0.0
    return min(1.0, max(0.0, (v - col.lo) / span))


def dist_cell(col: ColumnSummary, a: Cell, b: Cell) -> float:
    """Distance between two cells of one independent column, in [0,1].

    Missing values assume the worst: with one side unknown the result is the
    largest distance any value could produce, with both unknown it is 1.
    """
    if a is MISSING and b is MISSING:
        return 1.0
    if not col.is_num:
        if a is MISSING or b is MISSING:
            return 1.0
        return 0.0 if a == b else 1.0
    if a is MISSING:
        bn = norm(col, b)
        return max(bn, 1.0 - bn)
    if b is MISSING:
        an = norm(col, a)
        return max(an, 1.0 - an)
    return abs(norm(col, a) - norm(col, b))


def dist_row(data: Dataset, r1: Row, r2: Row) -> float:
    """Euclidean distance over the independent columns, scaled into [0,1]."""
    if not data.x:
        raise ValueError("dataset has no independent columns")
    total = 0.0
    for col in data.x:
        d = dist_cell(col, r1.cells[col.position], r2.cells[col.position])
        total += d * d
    return math.sqrt(total) / math.sqrt(len(data.x))


def d2h(data: Dataset, row: Row) -> float:
    """Distance of a labeled row's goals to their ideal values, in [0,1].

    Each goal is normalized to [0,1]; its ideal ("heaven") is 0 when
    minimizing and 1 when maximizing.  Smaller results are better rows.
    """
    if not data.y:
        raise ValueError("dataset has no goal columns")
    total = 0.0
    for col in data.y:
        v = row.cells[col.position]
        if v is MISSING:
            raise ValueError(f"row {row.ident} lacks a value for goal {col.name!r}")
        gap = col.heaven - norm(col, v)
        total += gap * gap
    return math.sqrt(total) / math.sqrt(len(data.y))


def is_labeled(data: Dataset, row: Row) -> bool:
    """True when every goal cell of the row is present."""
    return all(row.cells[col.position] is not MISSING for col in data.y)


def like_num(col: NumSummary, v: float) -> float:
    """Gaussian density of v under the column's running mean and sd.

    The epsilon guards keep the result finite even for sd = 0.
    """
    sd = col.sd
    gap = v - col.mu
    return math.exp(-(gap * gap) / (2 * sd * sd + _EPS)) / ((sd + _EPS) * _SQRT_2PI)


def log_like_num(col: NumSummary, v: float) -> float:
    """log(like_num(col, v)), computed directly so it never underflows."""
    sd = col.sd
    gap = v - col.mu
    return -(gap * gap) / (2 * sd * sd + _EPS) - math.log((sd + _EPS) * _SQRT_2PI)


def like_sym(col: SymSummary, v: str, m: float, prior: float) -> float:
    """Smoothed frequency of symbol v: (count + m*prior) / (n + m)."""
    return (col.counts.get(v, 0) + m * prior) / (col.n + m)


def loglike_row(data: Dataset, row: Row, nall: int, nh: int, m: float = 2, k: float = 1) -> float:
    """Log-likelihood that row belongs to the class summarized by data.

    nall is the total number of labeled rows across all classes and nh the
    number of classes; together with k they set the class prior.  Missing
    cells contribute nothing.  Numeric factors are computed in log space,
    so the result is finite for every input.
    """
    prior = (len(data.rows) + k) / (nall + k * nh)
    out = math.log(prior)
    for col in data.x:
        v = row.cells[col.position]
        if v is MISSING:
            continue
        if col.is_num:
            out += log_like_num(col, v)
        else:
            out += math.log(like_sym(col, v, m, prior))
    return out


def _parse_cell(token: str, col: ColumnSummary, where: str) -> Cell:
    if token in ("?", ""):
        return MISSING
    if col.is_num:
        try:
            return float(token)
        except ValueError:
            warnings.warn(f"{where}: non-numeric {token!r} in numeric column "
                          f"{col.name!r}, treated as missing")
            return MISSING
    return token


def load_csv(path: str) -> Dataset:
    """Read a comma-separated file: header line first, "?" marks missing."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            names = [t.strip() for t in next(reader)]
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        data = Dataset(names)
        for lineno, tokens in enumerate(reader, start=2):
            if not tokens:
                continue
            if len(tokens) != len(names):
                raise ValueError(f"{path}:{lineno}: expected {len(names)} cells, "
                                 f"got {len(tokens)}")
            cells = [_parse_cell(t.strip(), col, f"{path}:{lineno}")
                     for t, col in zip(tokens, data.cols)]
            add_row(data, Row(cells, ident=len(data.rows)))
    return data
