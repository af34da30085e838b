"""Simulation rig: run every treatment on every dataset, persist, report.

A treatment is an algorithm (with policy and budget where applicable)
applied to one dataset; each treatment is repeated with per-run seeds
derived from one master seed, so the whole experiment replays
byte-for-byte.  The baseline pseudo-treatment records the distance to
heaven of every row directly — one record per row, no search — giving
the untreated distribution the other treatments are judged against.

Reports group records per dataset, rank treatments with the statistical
harness, and print Table-style views with fixed-width ASCII box plots;
a cross-dataset summary counts how often each algorithm reaches each
rank and how many labels that cost.
"""
from __future__ import annotations

import hashlib
import io
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean, pstdev
from typing import Optional, Sequence

from .acquisition import lite_run
from .baseline import random_n
from .config import Config
from .oracle import masked_view
from .stats import RankedTreatment, Treatment, percentiles, scott_knott
from .sway import sway_best, sway_run
from .tabular import Dataset, d2h, load_csv

ALGORITHMS = ("lite-certain", "lite-uncertain", "sway", "random", "baseline")
BUDGETED = ("lite-certain", "lite-uncertain", "random")
DEFAULT_BUDGETS = (10, 20, 30, 40, 50, 60, 70, 80)


@dataclass(frozen=True)
class ExperimentPlan:
    """What to run: datasets x algorithms x budgets x repeats, one seed."""

    datasets: tuple[str, ...]
    algorithms: tuple[str, ...] = ALGORITHMS
    budgets: tuple[int, ...] = DEFAULT_BUDGETS
    repeats: int = 20
    seed: int = 1
    config: Optional[Config] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "datasets", tuple(str(p) for p in self.datasets))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "budgets", tuple(sorted(set(self.budgets))))
        if not self.datasets:
            raise ValueError("plan needs at least one dataset")
        unknown = sorted(set(self.algorithms) - set(ALGORITHMS))
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}; pick from {ALGORITHMS}")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")
        if not self.budgets and any(a in BUDGETED for a in self.algorithms):
            raise ValueError("budgeted algorithms need a non-empty budget grid")


@dataclass
class RunRecord:
    """One treatment execution (or one raw row, for the baseline)."""

    dataset: str
    algorithm: str          # lite | sway | random | baseline
    policy: str             # certain | uncertain | "" when not applicable
    budget: int             # planned labels; row count for baseline; 0 for sway
    repeat: int
    seed: int
    labels_used: int
    best_d2h: Optional[float]   # None when the run failed
    status: str = "ok"
    wall_ms: float = field(default=0.0, compare=False)


def derived_seed(master: int, dataset: str, treatment: str, budget: int,
                 repeat: int) -> int:
    """Stable per-run seed; distinct runs get distinct rng streams."""
    key = f"{master}|{dataset}|{treatment}|{budget}|{repeat}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def _one_run(data: Dataset, treatment: str, budget: int, seed: int,
             cfg: Config) -> tuple[int, float]:
    """Execute one search; returns (labels_used, best d2h in data's frame)."""
    rng = random.Random(seed)
    view, oracle = masked_view(data)
    if treatment == "random":
        best = random_n(view, oracle, budget, rng)
    elif treatment in ("lite-certain", "lite-uncertain"):
        policy = treatment.split("-", 1)[1]
        result = lite_run(view, oracle, budget, policy, rng, cfg)
        if result.aborted or result.best_row is None:
            raise RuntimeError("acquisition run aborted")
        best = result.best_row
    elif treatment == "sway":
        best = sway_best(sway_run(view, oracle, rng, cfg), oracle, rng)
    else:
        raise ValueError(f"not a runnable treatment: {treatment!r}")
    return oracle.label_count, d2h(data, best.row)


def run_experiment(plan: ExperimentPlan) -> list[RunRecord]:
    """Execute the full plan.

    Unreadable datasets are reported on stderr and skipped; a failing run
    becomes a status="failed" record and the experiment continues.
    """
    cfg = plan.config or Config()
    records: list[RunRecord] = []
    for path in plan.datasets:
        name = Path(path).stem
        try:
            data = load_csv(path)
        except (OSError, ValueError) as err:
            print(f"skipping {path}: {err}", file=sys.stderr)
            continue
        for algo in plan.algorithms:
            if algo == "baseline":
                for i, row in enumerate(data.rows):
                    records.append(RunRecord(
                        dataset=name, algorithm="baseline", policy="",
                        budget=len(data.rows), repeat=i, seed=0,
                        labels_used=len(data.rows), best_d2h=d2h(data, row)))
                continue
            budgets = plan.budgets if algo in BUDGETED else (0,)
            policy = algo.split("-", 1)[1] if algo.startswith("lite-") else ""
            short = "lite" if algo.startswith("lite-") else algo
            for budget in budgets:
                for repeat in range(plan.repeats):
                    seed = derived_seed(plan.seed, name, algo, budget, repeat)
                    started = time.perf_counter()
                    try:
                        labels, best = _one_run(data, algo, budget, seed, cfg)
                        record = RunRecord(name, short, policy, budget, repeat,
                                           seed, labels, best)
                    except (ValueError, RuntimeError) as err:
                        print(f"run failed ({name}/{algo}&{budget} #{repeat}): {err}",
                              file=sys.stderr)
                        record = RunRecord(name, short, policy, budget, repeat,
                                           seed, 0, None, status="failed")
                    record.wall_ms = (time.perf_counter() - started) * 1000.0
                    records.append(record)
    return records


# ------------------------------------------------------------- persistence

_CSV_FIELDS = ("dataset", "algorithm", "policy", "budget", "repeat", "seed",
               "labels_used", "best_d2h", "status")


def records_to_csv(records: Sequence[RunRecord]) -> str:
    """One header line, one line per record; wall time is measurement
    noise, not a result, so it is not persisted."""
    out = io.StringIO()
    out.write(",".join(_CSV_FIELDS) + "\n")
    for r in records:
        best = "" if r.best_d2h is None else repr(r.best_d2h)
        out.write(f"{r.dataset},{r.algorithm},{r.policy},{r.budget},"
                  f"{r.repeat},{r.seed},{r.labels_used},{best},{r.status}\n")
    return out.getvalue()


def records_from_csv(text: str) -> list[RunRecord]:
    lines = text.strip().splitlines()
    if not lines or lines[0] != ",".join(_CSV_FIELDS):
        raise ValueError("not a results file: bad header line")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(_CSV_FIELDS):
            raise ValueError(f"bad results line: {line!r}")
        ds, algo, policy, budget, repeat, seed, labels, best, status = parts
        records.append(RunRecord(
            dataset=ds, algorithm=algo, policy=policy, budget=int(budget),
            repeat=int(repeat), seed=int(seed), labels_used=int(labels),
            best_d2h=float(best) if best else None, status=status))
    return records


# --------------------------------------------------------------- reporting

def treatment_name(record: RunRecord) -> str:
    return record.policy if record.algorithm == "lite" else record.algorithm


def build_treatments(records: Sequence[RunRecord]) -> list[Treatment]:
    """Pool one dataset's records into Treatments keyed by name and budget.

    Failed runs are left out.  sway has no planned budget, so its printed
    label count is the rounded mean of the labels it actually used.
    """
    by_key: dict[tuple[str, int], list[RunRecord]] = {}
    for r in records:
        if r.status != "ok":
            continue
        by_key.setdefault((treatment_name(r), r.budget), []).append(r)
    treatments = []
    for (name, budget), group in sorted(by_key.items()):
        if name == "sway":
            budget = round(fmean(r.labels_used for r in group))
        treatments.append(Treatment(name, budget,
                                    tuple(r.best_d2h for r in group)))
    return treatments


def box_plot(values: Sequence[float], width: int = 50) -> str:
    """Fixed-width gutter: '-' spans the 25th..75th percentiles, 'o' marks
    the median at column round((width-1) * median)."""
    p25, p50, p75 = percentiles(values)
    cells = [" "] * width
    lo, mid, hi = (round((width - 1) * v) for v in (p25, p50, p75))
    for i in range(lo, hi + 1):
        cells[i] = "-"
    cells[mid] = "o"
    return "".join(cells)


def _rank_table(ranked: Sequence[RankedTreatment], title: str,
                resort: bool = False) -> list[str]:
    rows = list(ranked)
    if resort:
        rows.sort(key=lambda r: (r.rank, r.treatment.budget))
    lines = [title, f"{'rank':>4}  {'treatment':<14} {'labels':>6} "
                    f"{'50th':>6} {'(75-25)th':>9}"]
    last_rank = None
    for r in rows:
        shown = f"{r.rank:>4}" if r.rank != last_rank else "    "
        last_rank = r.rank
        lines.append(f"{shown}  {r.treatment.label:<14} {r.treatment.budget:>6} "
                     f"{r.median:>6.2f} {r.spread:>9.2f}  |{box_plot(r.treatment.results)}|")
    return lines


def rank_dataset(records: Sequence[RunRecord]) -> list[RankedTreatment]:
    return scott_knott(build_treatments(records))


def render_report(records: Sequence[RunRecord], table6: bool = False) -> str:
    """Per-dataset rank tables (sorted by result, then re-sorted by rank
    and label cost), plus the cross-dataset summary when table6 is set."""
    by_dataset: dict[str, list[RunRecord]] = {}
    for r in records:
        by_dataset.setdefault(r.dataset, []).append(r)
    lines: list[str] = []
    ranked_by_dataset: dict[str, list[RankedTreatment]] = {}
    for dataset in sorted(by_dataset):
        treatments = build_treatments(by_dataset[dataset])
        if not treatments:
            lines += [f"== {dataset}: no successful runs ==", ""]
            continue
        ranked = scott_knott(treatments)
        ranked_by_dataset[dataset] = ranked
        lines += _rank_table(ranked, f"== {dataset}: sorted by median d2h ==")
        lines.append("")
        lines += _rank_table(ranked, f"== {dataset}: sorted by rank, then labels ==",
                             resort=True)
        lines.append("")
    if table6 and ranked_by_dataset:
        lines += summarize_best(ranked_by_dataset)
    return "\n".join(lines)


def best_treatment_of(ranked: Sequence[RankedTreatment],
                      name: str) -> Optional[RankedTreatment]:
    """The named algorithm's cheapest entry in its best rank."""
    mine = [r for r in ranked if r.treatment.name == name]
    if not mine:
        return None
    return min(mine, key=lambda r: (r.rank, r.treatment.budget))


def min_labels_beating_baseline(ranked: Sequence[RankedTreatment]) -> Optional[int]:
    """Fewest labels among treatments ranked just above the baseline."""
    base = [r.rank for r in ranked if r.treatment.name == "baseline"]
    if not base or base[0] == 0:
        return None
    prior = [r.treatment.budget for r in ranked if r.rank == base[0] - 1]
    return min(prior) if prior else None


def summarize_best(ranked_by_dataset: dict[str, list[RankedTreatment]]) -> list[str]:
    """Cross-dataset view: how often each algorithm lands at each rank,
    and the labels its best treatment needed, mean (sd)."""
    names = sorted({r.treatment.name for ranked in ranked_by_dataset.values()
                    for r in ranked})
    lines = ["== across datasets: rank frequency and label cost =="]
    lines.append(f"{'algorithm':<12} {'rank':>4} {'datasets':>8}   labels mean (sd)")
    for name in names:
        at_rank: dict[int, list[int]] = {}
        for ranked in ranked_by_dataset.values():
            best = best_treatment_of(ranked, name)
            if best is not None:
                at_rank.setdefault(best.rank, []).append(best.treatment.budget)
        for rank in sorted(at_rank):
            labels = at_rank[rank]
            sd = pstdev(labels) if len(labels) > 1 else 0.0
            lines.append(f"{name:<12} {rank:>4} {len(labels):>8}   "
                         f"{fmean(labels):.1f} ({sd:.1f})")
    thresholds = [min_labels_beating_baseline(r)
                  for r in ranked_by_dataset.values()]
    thresholds = [t for t in thresholds if t is not None]
    if thresholds:
        sd = pstdev(thresholds) if len(thresholds) > 1 else 0.0
        lines.append(f"labels needed to beat the baseline: "
                     f"mean {fmean(thresholds):.1f} (sd {sd:.1f}) "
                     f"over {len(thresholds)} datasets")
    return lines
