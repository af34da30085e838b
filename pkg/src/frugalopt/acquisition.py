"""Sequential model-based acquisition over a labeled/unlabeled split.

Label a handful of seed rows, sort them by distance to heaven, split into
an elite "best" block and a "rest" block, then repeatedly: score every
unlabeled row by how its two naive Bayes log-likelihoods (B against best,
R against rest) rank under a policy, label the top candidate, and rebuild
the model from scratch.

Policies:
  certain    score = B - R; exploit the model's current beliefs
  uncertain  score orders rows like (b+r)/|b-r| on raw likelihoods; probe
             where the model cannot tell best from rest

The candidate pool is scored in bulk with numpy for speed; the scalar
`rank_candidates` path computes the same numbers row by row and is the
reference the vectorized path is tested against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .config import Config
from .oracle import LabeledRow, Oracle, OracleError
from .tabular import (
    _EPS,
    _SQRT_2PI,
    MISSING,
    Dataset,
    Row,
    clone,
    d2h,
    loglike_row,
)
from .validation import check_dataset

_TIE_EPS = 1e-32    # guards the b = r singularity in the uncertain score
_DEFAULT = Config()


@dataclass(frozen=True)
class Policy:
    """How desirable an unlabeled row is, given its B and R log-likelihoods."""

    name: str
    score: Callable[[float, float], float]
    vector_score: Callable[[np.ndarray, np.ndarray], np.ndarray]


def _certain(b: float, r: float) -> float:
    return b - r


def _certain_vec(b: np.ndarray, r: np.ndarray) -> np.ndarray:
    return b - r


def _uncertain(b: float, r: float) -> float:
    top = max(b, r)
    raw_b = math.exp(b - top)
    raw_r = math.exp(r - top)
    return (raw_b + raw_r) / (abs(raw_b - raw_r) + _TIE_EPS)


def _uncertain_vec(b: np.ndarray, r: np.ndarray) -> np.ndarray:
    top = np.maximum(b, r)
    raw_b = np.exp(b - top)
    raw_r = np.exp(r - top)
    return (raw_b + raw_r) / (np.abs(raw_b - raw_r) + _TIE_EPS)


POLICIES: dict[str, Policy] = {
    "certain": Policy("certain", _certain, _certain_vec),
    "uncertain": Policy("uncertain", _uncertain, _uncertain_vec),
}


def get_policy(policy: Union[str, Policy]) -> Policy:
    if isinstance(policy, Policy):
        return policy
    try:
        return POLICIES[policy]
    except KeyError:
        raise ValueError(f"unknown policy {policy!r}; pick from {sorted(POLICIES)}") from None


@dataclass(frozen=True)
class Candidate:
    """One scored pool row; b and r are log-likelihoods (None in seed phase)."""

    row: Row
    b: Optional[float]
    r: Optional[float]
    score: Optional[float]
    seed: bool = False


@dataclass
class LiteResult:
    """Outcome of one acquisition run."""

    best_row: Optional[LabeledRow]
    labels_used: int
    model: Optional[tuple[Dataset, Dataset]]
    trajectory: list[tuple[int, float]] = field(default_factory=list)
    aborted: bool = False


def split_best_rest(labeled: Dataset, cfg: Config = _DEFAULT) -> tuple[Dataset, Dataset]:
    """Split d2h-sorted labeled rows into round(n**best) elite and the rest.

    The caller must pass rows already sorted ascending by d2h.  The elite
    block is capped at n-1 so both classes stay non-empty.
    """
    n = len(labeled.rows)
    if n < 2:
        raise ValueError(f"need at least 2 labeled rows to split, got {n}")
    cut = int(n ** cfg.best + 0.5)
    cut = max(1, min(cut, n - 1))
    return clone(labeled, labeled.rows[:cut]), clone(labeled, labeled.rows[cut:])


def rank_candidates(best: Dataset, rest: Dataset, pool: Sequence[Row],
                    policy: Union[str, Policy], nall: int,
                    cfg: Config = _DEFAULT) -> list[Candidate]:
    """Score and sort the whole pool, descending; ties keep pool order."""
    policy = get_policy(policy)
    scored = []
    for row in pool:
        b = loglike_row(best, row, nall, 2, m=cfg.m, k=cfg.k)
        r = loglike_row(rest, row, nall, 2, m=cfg.m, k=cfg.k)
        scored.append(Candidate(row, b, r, policy.score(b, r)))
    order = sorted(range(len(scored)), key=lambda i: (-scored[i].score, i))
    return [scored[i] for i in order]


def acquire(best: Dataset, rest: Dataset, pool: Sequence[Row],
            policy: Union[str, Policy], nall: int,
            cfg: Config = _DEFAULT) -> list[Row]:
    """Rank the pool under the policy, keep the top upper-fraction.

    The first returned row is the next one worth labeling; the truncation
    caps how deep a caller may reach into this round's ranking.
    """
    if not pool:
        raise ValueError("empty candidate pool")
    ranked = rank_candidates(best, rest, pool, policy, nall, cfg)
    keep = max(1, int(len(ranked) * cfg.upper))
    return [c.row for c in ranked[:keep]]


class _PoolScorer:
    """Bulk log-likelihood scoring of a fixed candidate pool.

    Column values are pulled into arrays once; each call re-scores the whole
    pool against freshly built class summaries.  Must agree with
    rank_candidates to float precision (tested).
    """

    def __init__(self, data: Dataset, pool: Sequence[Row]):
        self.pool = list(pool)
        self.alive = np.ones(len(self.pool), dtype=bool)
        self._num: list[tuple[int, np.ndarray]] = []
        self._sym: list[tuple[int, list]] = []
        for col in data.x:
            cells = [row.cells[col.position] for row in self.pool]
            if col.is_num:
                arr = np.array([np.nan if v is MISSING else float(v) for v in cells])
                self._num.append((col.position, arr))
            else:
                self._sym.append((col.position, cells))

    @property
    def alive_count(self) -> int:
        return int(self.alive.sum())

    def kill(self, index: int) -> None:
        self.alive[index] = False

    def class_loglike(self, class_data: Dataset, nall: int, nh: int,
                      m: float, k: float) -> np.ndarray:
        prior = (len(class_data.rows) + k) / (nall + k * nh)
        total = np.full(len(self.pool), math.log(prior))
        by_position = {col.position: col for col in class_data.x}
        for position, arr in self._num:
            col = by_position[position]
            sd = col.sd
            gap = arr - col.mu
            cell = -(gap * gap) / (2 * sd * sd + _EPS) - math.log((sd + _EPS) * _SQRT_2PI)
            total += np.where(np.isnan(arr), 0.0, cell)
        for position, values in self._sym:
            col = by_position[position]
            denom = col.n + m
            counts = col.counts
            total += np.array([0.0 if v is MISSING else
                               math.log((counts.get(v, 0) + m * prior) / denom)
                               for v in values])
        return total

    def top_alive(self, scores: np.ndarray) -> int:
        """Index of the best-scoring live row; ties go to the lowest index."""
        live = np.flatnonzero(self.alive)
        return int(live[np.argmax(scores[live])])


def lite_run(data: Dataset, oracle: Oracle, budget: int,
             policy: Union[str, Policy], rng,
             cfg: Config = _DEFAULT,
             on_candidate: Optional[Callable[[Candidate, int], None]] = None) -> LiteResult:
    """Run the full acquisition loop and return the best labeled row.

    Shuffles the rows with rng, labels the first cfg.start of them, then
    acquires one label per iteration for up to budget - cfg.start rounds,
    stopping early if the pool drops below 3 rows.  on_candidate, when
    given, is invoked with each row just before its labeling is requested;
    interactive services use it to surface scores to the human oracle.

    If the oracle fails mid-run the partial result is returned with
    aborted=True rather than raising.
    """
    policy = get_policy(policy)
    check_dataset(data, min_rows=cfg.start + 3)
    if budget < cfg.start + 1:
        raise ValueError(f"budget must be at least start+1 = {cfg.start + 1}, got {budget}")

    rows = list(data.rows)
    rng.shuffle(rows)
    done: list[Row] = []
    aborted = False
    model: Optional[tuple[Dataset, Dataset]] = None

    try:
        for row in rows[:cfg.start]:
            if on_candidate is not None:
                on_candidate(Candidate(row, None, None, None, seed=True), len(done))
            done.append(oracle.label(row).row)

        pool = rows[cfg.start:]
        scorer = _PoolScorer(data, pool)
        labeled = clone(data, done, order=True)

        for _ in range(budget - cfg.start):
            if scorer.alive_count < 3:
                break
            best_ds, rest_ds = split_best_rest(labeled, cfg)
            nall = len(done)
            b_all = scorer.class_loglike(best_ds, nall, 2, cfg.m, cfg.k)
            r_all = scorer.class_loglike(rest_ds, nall, 2, cfg.m, cfg.k)
            scores = policy.vector_score(b_all, r_all)
            pick = scorer.top_alive(scores)
            chosen = scorer.pool[pick]
            if on_candidate is not None:
                on_candidate(Candidate(chosen, float(b_all[pick]), float(r_all[pick]),
                                       float(scores[pick])), len(done))
            done.append(oracle.label(chosen).row)
            scorer.kill(pick)
            labeled = clone(data, done, order=True)
    except OracleError:
        aborted = True

    final = clone(data, done, order=True)
    if len(final.rows) >= 2:
        model = split_best_rest(final, cfg)
    trajectory = incumbent_trajectory(final, done)
    best = oracle.label(final.rows[0]) if final.rows else None
    return LiteResult(best_row=best, labels_used=len(done), model=model,
                      trajectory=trajectory, aborted=aborted)


def incumbent_trajectory(frame: Dataset, done: Sequence[Row]) -> list[tuple[int, float]]:
    """(labels_used, best-d2h-so-far) after each labeling, in labeling order.

    d2h is measured against `frame` (a clone summarizing all labeled rows),
    one fixed range per run; the running minimum makes the series
    non-increasing by construction.
    """
    best = math.inf
    out = []
    for used, row in enumerate(done, start=1):
        best = min(best, d2h(frame, row))
        out.append((used, best))
    return out
