"""Labeling oracles: the boundary where goal values are paid for.

Algorithms never read goal cells off unlabeled rows; they ask an oracle.
The cached flavor answers from a fully labeled dataset (simulation), the
interactive flavor blocks until a human answer arrives over the review
service.  Both count each row's first labeling exactly once, keyed on the
row's identity, so re-asking is free.
"""
from __future__ import annotations

import threading
from collections import deque
from typing import Iterable, Optional, Sequence

from .tabular import MISSING, Dataset, Row, add_row


class OracleError(RuntimeError):
    """Base class for labeling failures."""


class UnknownRow(OracleError):
    """A cached oracle was asked about a row it has no goals for."""


class SessionClosed(OracleError):
    """The interactive session ended while a labeling was outstanding."""


class StaleRequest(OracleError):
    """An answer arrived for a row that is not the pending request."""


class LabeledRow:
    """A row with every goal cell present, plus which oracle filled it."""

    __slots__ = ("row", "source")

    def __init__(self, row: Row, source: str):
        self.row = row
        self.source = source

    def __repr__(self) -> str:
        return f"LabeledRow({self.row!r}, source={self.source!r})"


class Oracle:
    """Produces goal values on demand; counts first-time labelings.

    label() is idempotent per row identity: the first call pays (and counts),
    later calls return the cached answer unchanged.
    """

    kind = "abstract"

    def __init__(self) -> None:
        self._memo_lock = threading.Lock()
        self._memo: dict[int, LabeledRow] = {}
        self.label_count = 0

    def label(self, row: Row) -> LabeledRow:
        if row.ident < 0:
            raise OracleError("row has no identity; oracles key on row.ident")
        with self._memo_lock:
            hit = self._memo.get(row.ident)
        if hit is not None:
            return hit
        filled = self._fill(row)
        with self._memo_lock:
            hit = self._memo.get(row.ident)
            if hit is None:
                hit = LabeledRow(filled, self.kind)
                self._memo[row.ident] = hit
                self.label_count += 1
        return hit

    def labeled_rows(self) -> list[LabeledRow]:
        """Every row labeled so far, in labeling order."""
        with self._memo_lock:
            return list(self._memo.values())

    def _fill(self, row: Row) -> Row:
        raise NotImplementedError


class CachedOracle(Oracle):
    """Answers from stored ground truth; the simulation-mode oracle."""

    kind = "cached"

    def __init__(self, truth: dict[int, Row]):
        super().__init__()
        self._truth = truth

    def _fill(self, row: Row) -> Row:
        true_row = self._truth.get(row.ident)
        if true_row is None:
            raise UnknownRow(f"no stored goals for row {row.ident}")
        return true_row


class InteractiveOracle(Oracle):
    """Blocks each labeling until an answer arrives from another thread.

    The algorithm thread calls label(); the serving thread observes the
    pending row via pending() and resolves it via answer().  At most one
    request is outstanding at a time.  An optional preload queue replays
    journaled answers silently, which is how sessions survive restarts.
    """

    kind = "interactive"

    def __init__(self, goal_positions: Sequence[int],
                 preload: Optional[Iterable[Sequence[float]]] = None,
                 cond: Optional[threading.Condition] = None):
        super().__init__()
        self.cond = cond or threading.Condition()
        self._goal_positions = list(goal_positions)
        self._preload = deque(preload or ())
        self._pending: Optional[Row] = None
        self._answer: Optional[list[float]] = None
        self._closed = False

    def _apply(self, row: Row, goals: Sequence[float]) -> Row:
        cells = list(row.cells)
        for position, value in zip(self._goal_positions, goals):
            cells[position] = value
        return Row(cells, ident=row.ident)

    def _fill(self, row: Row) -> Row:
        with self.cond:
            if self._closed:
                raise SessionClosed("session is closed")
            if self._preload:
                return self._apply(row, self._preload.popleft())
            self._pending = row
            self._answer = None
            self.cond.notify_all()
            while self._answer is None and not self._closed:
                self.cond.wait()
            if self._answer is None:
                self._pending = None
                raise SessionClosed("session closed while awaiting a label")
            goals, self._answer = self._answer, None
            self._pending = None
            self.cond.notify_all()
            return self._apply(row, goals)

    def pending(self) -> Optional[Row]:
        with self.cond:
            return self._pending

    def answer(self, ident: int, goals: Sequence[float]) -> None:
        """Resolve the pending request for row `ident` with its goal values."""
        if len(goals) != len(self._goal_positions):
            raise ValueError(f"expected {len(self._goal_positions)} goal values, "
                             f"got {len(goals)}")
        with self.cond:
            if self._closed:
                raise SessionClosed("session is closed")
            if self._pending is None or self._pending.ident != ident:
                raise StaleRequest(f"row {ident} is not the pending request")
            self._answer = [float(g) for g in goals]
            self.cond.notify_all()

    def close(self) -> None:
        with self.cond:
            self._closed = True
            self.cond.notify_all()


def masked_view(data: Dataset) -> tuple[Dataset, CachedOracle]:
    """Split a labeled dataset into (view with goals hidden, oracle that knows them).

    Row identities are assigned by position, shared between view and oracle,
    so algorithms can only reach goal values by paying the oracle.
    """
    view = Dataset(data.names)
    truth: dict[int, Row] = {}
    goal_positions = [col.position for col in data.y]
    for index, row in enumerate(data.rows):
        cells = list(row.cells)
        for position in goal_positions:
            cells[position] = MISSING
        add_row(view, Row(cells, ident=index))
        truth[index] = Row(row.cells, ident=index)
    return view, CachedOracle(truth)
