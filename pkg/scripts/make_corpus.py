"""Generate the seeded synthetic dataset corpus under data/.

Each dataset is a comma-separated file following the column-name rules:
an upper-case first letter marks a numeric column, a trailing "+"/"-"
marks a goal to maximize/minimize, anything else is a symbolic attribute.

Rows are built from a latent quality score s in [0, 1] (0 = heaven):
goal columns are monotone in s plus noise, and a few "driver" attributes
correlate with s so that frugal optimizers have structure to learn; the
remaining attributes are independent noise.  The flagship 500-row agile
dataset is calibrated so the distance-to-heaven distribution over all
rows has median 0.51 and IQR 0.20, with a small low-tail cluster that a
few dozen labels can reach.

Distance-to-heaven statistics used during calibration are computed here
with numpy, independently of the package's own implementation.

Usage:
    python scripts/make_corpus.py [--out data] [--probe]

--probe additionally runs quick optimizer spot-checks on the flagship
dataset and prints the medians (slow-ish; generation itself is fast).
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

# --------------------------------------------------------------- utilities


def nearest_rank(sorted_vals: np.ndarray, p: float) -> float:
    return float(sorted_vals[max(0, math.ceil(p * len(sorted_vals)) - 1)])


def d2h_stats(header: list[str], rows: list[list]) -> np.ndarray:
    """Distance to heaven per row, computed from scratch with numpy."""
    goals = [(i, name.endswith("-")) for i, name in enumerate(header)
             if name.endswith(("+", "-"))]
    cols = []
    for i, minimize in goals:
        v = np.array([float(r[i]) for r in rows])
        lo, hi = v.min(), v.max()
        norm = (v - lo) / (hi - lo) if hi > lo else np.zeros_like(v)
        heaven = 0.0 if minimize else 1.0
        cols.append((heaven - norm) ** 2)
    return np.sqrt(sum(cols) / len(cols))


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def fmt(x: float, digits: int = 5) -> float:
    """Round floats so files stay compact and diff-stable."""
    return float(f"{x:.{digits}g}")


# ----------------------------------------------------- latent quality model


def latent_scores(rng: np.random.Generator, n: int, mid_a: float, mid_b: float,
                  elite_count: int, low_lo: float = 0.09,
                  bulk_lo: float = 0.22) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mixture latent: a broad mid-quality bulk plus a small optimal plateau.

    The bulk lives on [bulk_lo, 1]; exactly elite_count rows sit at
    low_lo, separated from the bulk by a gap.  Goal columns give plateau
    rows their exact noise-free values (see goal()), so the near-optimal
    region is a handful of equally-good configurations -- once an
    optimizer finds any of them, extra labels cannot improve the result,
    which is how quality saturates with budget in real tuning corpora.

    Returns (goal latent, attribute latent, plateau mask).  The goal
    latent keeps the plateau well below the bulk, but the attribute
    latent places plateau rows just under the bulk floor so attribute
    space stays contiguous: optimizers reach the plateau by following
    the attribute gradient rather than jumping a gap no model of the
    labeled rows could bridge.
    """
    s = bulk_lo + (1.0 - bulk_lo) * rng.beta(mid_a, mid_b, size=n)
    elite = np.zeros(n, dtype=bool)
    elite[rng.permutation(n)[:elite_count]] = True
    s[elite] = low_lo
    sx = s.copy()
    sx[elite] = rng.uniform(bulk_lo - 0.04, bulk_lo + 0.05, size=elite_count)
    return np.clip(s, 0.0, 1.0), np.clip(sx, 0.0, 1.0), elite


def driver(rng: np.random.Generator, s: np.ndarray, lo: float, hi: float,
           noise: float, increasing: bool = True) -> np.ndarray:
    """Attribute correlated with the latent score, in [lo, hi]."""
    base = s if increasing else 1.0 - s
    u = np.clip(base + rng.normal(0.0, noise, size=len(s)), 0.0, 1.0)
    return lo + (hi - lo) * u


def filler(rng: np.random.Generator, n: int, lo: float, hi: float) -> np.ndarray:
    """Attribute with no relation to the latent score."""
    return rng.uniform(lo, hi, size=n)


def goal(rng: np.random.Generator, s: np.ndarray, lo: float, hi: float,
         noise: float, minimize: bool,
         exact: np.ndarray | None = None) -> np.ndarray:
    """Goal column monotone in the latent score (low s = good).

    Rows flagged in `exact` get their noise-free value, so rows sharing a
    latent score share the goal value exactly (the optimal plateau)."""
    e = rng.normal(0.0, noise, size=len(s))
    if exact is not None:
        e[exact] = 0.0
    u = np.clip(s + e, 0.0, 1.0)
    if not minimize:
        u = 1.0 - u
    return lo + (hi - lo) * u


# --------------------------------------------------------- agile simulator


POM3_HEADER = ["Culture", "Criticality", "CriticalityModifier", "InitialKnown",
               "InterDependency", "Dynamism", "Size", "Plan", "TeamSize",
               "Cost-", "Idle-", "Completion-"]


def gen_pom3(seed: int, mid_a: float, mid_b: float, elite_count: int,
             n: int = 500) -> tuple[list[str], list[list]]:
    rng = np.random.default_rng(seed)
    s, sx, elite = latent_scores(rng, n, mid_a, mid_b, elite_count)
    cols = [
        driver(rng, sx, 0.1, 0.9, 0.045, increasing=False),   # Culture
        filler(rng, n, 0.82, 1.26),                           # Criticality
        filler(rng, n, 2, 10),                                # CriticalityModifier
        driver(rng, sx, 0.4, 0.7, 0.05, increasing=False),    # InitialKnown
        filler(rng, n, 0, 100),                               # InterDependency
        driver(rng, sx, 1, 50, 0.045, increasing=True),       # Dynamism
        filler(rng, n, 30, 300),                              # Size
        driver(rng, sx, 0, 5, 0.05, increasing=True),         # Plan
        filler(rng, n, 1, 44),                                # TeamSize
        goal(rng, s, 100, 5000, 0.02, minimize=True, exact=elite),   # Cost-
        goal(rng, s, 0, 1, 0.02, minimize=True, exact=elite),        # Idle-
        goal(rng, s, 0, 1, 0.02, minimize=True, exact=elite),        # Completion-
    ]
    rows = [[fmt(c[i]) for c in cols] for i in range(n)]
    return POM3_HEADER, rows


def calibrate_pom3a(seed: int) -> tuple[list[str], list[list]]:
    """Grid-search the latent mixture until the d2h bands hold with margin."""
    target_med, target_iqr = 0.51, 0.20
    best = None
    for mid_a in np.arange(1.2, 10.01, 0.4):
        for mid_b in np.arange(max(0.6, mid_a - 1.0), mid_a + 4.51, 0.25):
            for elite_count in (12, 14, 16):
                header, rows = gen_pom3(seed, float(mid_a), float(mid_b), elite_count)
                d = np.sort(d2h_stats(header, rows))
                med = nearest_rank(d, 0.50)
                iqr = nearest_rank(d, 0.75) - nearest_rank(d, 0.25)
                p02 = nearest_rank(d, 0.02)
                p08 = nearest_rank(d, 0.08)
                if p02 > 0.13:
                    continue
                cost = (abs(med - target_med) / 0.02
                        + abs(iqr - target_iqr) / 0.03
                        + 0.25 * abs(p08 - 0.22) / 0.05)
                if best is None or cost < best[0]:
                    best = (cost, float(mid_a), float(mid_b), elite_count, med, iqr)
    if best is None:
        raise SystemExit("calibration grid found no admissible parameters")
    cost, mid_a, mid_b, elite_count, med, iqr = best
    print(f"  calibrated: a={mid_a} b={mid_b} elite={elite_count} "
          f"-> median {med:.3f}, IQR {iqr:.3f}")
    if abs(med - target_med) > 0.012 or abs(iqr - target_iqr) > 0.020:
        raise SystemExit("calibration landed outside the safety margin")
    return gen_pom3(seed, mid_a, mid_b, elite_count)


# ------------------------------------------------------- other generators


def gen_ss(seed: int, n: int, x_names: list[str], goal_specs: list[tuple[str, bool]],
           driver_count: int = 3, elite_count: int = 14) -> tuple[list[str], list[list]]:
    """Configuration-benchmark shape: all-numeric attributes, 1-2 goals."""
    rng = np.random.default_rng(seed)
    s, sx, elite = latent_scores(rng, n, 4.0, 3.8, elite_count=elite_count)
    cols = []
    for j, _ in enumerate(x_names):
        lo, hi = sorted(rng.uniform(0, 100, size=2))
        hi = max(hi, lo + 10)
        if j < driver_count:
            cols.append(driver(rng, sx, lo, hi, 0.03, increasing=bool(j % 2 == 0)))
        else:
            cols.append(filler(rng, n, lo, hi))
    for name, minimize in goal_specs:
        lo, hi = (0, 100) if name.endswith("-") else (0, 1000)
        cols.append(goal(rng, s, lo, hi, 0.04, minimize, exact=elite))
    header = x_names + [name for name, _ in goal_specs]
    rows = [[fmt(c[i]) for c in cols] for i in range(n)]
    return header, rows


def gen_auto93(seed: int, n: int = 398) -> tuple[list[str], list[list]]:
    """Car-design shape: coarse integer attributes, one symbolic origin."""
    rng = np.random.default_rng(seed)
    s, sx, elite = latent_scores(rng, n, 3.6, 3.4, elite_count=12)

    def gnoise(sd: float) -> np.ndarray:
        e = rng.normal(0, sd, n)
        e[elite] = 0.0
        return e

    clndrs_pick = np.clip((sx * 3 + rng.normal(0, 0.45, n)).round(), 0, 2).astype(int)
    clndrs = np.array([4, 6, 8])[clndrs_pick]
    volume = (68 + (455 - 68) * np.clip(sx + rng.normal(0, 0.035, n), 0, 1)).round()
    model = rng.integers(70, 83, size=n)
    origin_p = np.where(sx < 0.35, 0.6, 0.12)  # smaller cars skew import
    origin = np.where(rng.random(n) < origin_p,
                      rng.choice(["2", "3"], size=n), "1")
    lbs = (1600 + 3600 * np.clip(s + gnoise(0.05), 0, 1)).round()
    acc = (8 + 17 * np.clip(1 - s + gnoise(0.05), 0, 1)).round(1)
    mpg = (np.clip(10 + 35 * np.clip(1 - s + gnoise(0.06), 0, 1),
                   10, 50) / 10).round() * 10
    header = ["Clndrs", "Volume", "Model", "origin", "Lbs-", "Acc+", "Mpg+"]
    rows = [[int(clndrs[i]), int(volume[i]), int(model[i]), origin[i],
             int(lbs[i]), float(acc[i]), int(mpg[i])] for i in range(n)]
    return header, rows


def gen_wine(seed: int, n: int = 1599) -> tuple[list[str], list[list]]:
    rng = np.random.default_rng(seed)
    s, sx, elite = latent_scores(rng, n, 4.2, 4.0, elite_count=18)
    x = [
        driver(rng, sx, 4.6, 15.9, 0.05, increasing=True),   # FixedAcidity
        driver(rng, sx, 0.12, 1.58, 0.045, increasing=True), # VolatileAcidity
        driver(rng, sx, 0.0, 1.0, 0.055, increasing=False),  # CitricAcid
        filler(rng, n, 0.9, 15.5),                           # ResidualSugar
        filler(rng, n, 0.012, 0.611),                        # Chlorides
        filler(rng, n, 1, 72),                               # FreeSulfur
        filler(rng, n, 6, 289),                              # TotalSulfur
        filler(rng, n, 0.990, 1.004),                        # Density
        filler(rng, n, 2.74, 4.01),                          # PH
        driver(rng, sx, 8.4, 14.9, 0.05, increasing=False),  # Alcohol
    ]
    cost = goal(rng, s, 4, 80, 0.04, minimize=True, exact=elite)
    quality = goal(rng, s, 3, 8, 0.04, minimize=False, exact=elite).round(0)
    header = ["FixedAcidity", "VolatileAcidity", "CitricAcid", "ResidualSugar",
              "Chlorides", "FreeSulfur", "TotalSulfur", "Density", "PH",
              "Alcohol", "Cost-", "Quality+"]
    rows = [[fmt(c[i], 4) for c in x] + [fmt(cost[i], 4), int(quality[i])]
            for i in range(n)]
    return header, rows


def gen_china(seed: int, n: int = 499) -> tuple[list[str], list[list]]:
    """Waterfall effort shape: many numeric size counts, one effort goal."""
    rng = np.random.default_rng(seed)
    s, sx, elite = latent_scores(rng, n, 4.0, 3.9, elite_count=12)
    names = ["AFP", "Input", "Output", "Enquiry", "File", "Interface", "Added",
             "Changed", "Deleted", "PDR", "NPDR", "NPDU", "Resource", "DevType",
             "Duration", "Nstaff", "Schedule", "Docs"]
    cols = []
    for j, _ in enumerate(names):
        lo, hi = sorted(rng.uniform(0, 2000, size=2))
        hi = max(hi, lo + 50)
        if j in (0, 9, 15):   # AFP, PDR, Nstaff carry the signal
            cols.append(driver(rng, sx, lo, hi, 0.045, increasing=True))
        else:
            cols.append(filler(rng, n, lo, hi))
    cols.append(goal(rng, s, 26, 54620, 0.035, minimize=True, exact=elite))  # Effort-
    header = names + ["Effort-"]
    rows = [[fmt(c[i]) for c in cols] for i in range(n)]
    return header, rows


def gen_commits(seed: int, n: int = 10_000) -> tuple[list[str], list[list]]:
    """Repository-health shape: the big dataset for deep recursive splits."""
    rng = np.random.default_rng(seed)
    s, sx, elite = latent_scores(rng, n, 4.1, 3.9, elite_count=14)
    stars = driver(rng, sx, 0, 5000, 0.04, increasing=False)
    forks = driver(rng, sx, 0, 900, 0.045, increasing=False)
    watchers = filler(rng, n, 0, 400)
    age = driver(rng, sx, 1, 120, 0.05, increasing=True)
    lang = rng.choice(["py", "js", "go", "rs", "java"], size=n,
                      p=[0.3, 0.3, 0.15, 0.1, 0.15])
    staleness = goal(rng, s, 0, 365, 0.04, minimize=True, exact=elite)
    commits = goal(rng, s, 0, 4000, 0.04, minimize=False, exact=elite)
    contributors = goal(rng, s, 1, 250, 0.05, minimize=False, exact=elite)
    header = ["Stars", "Forks", "Watchers", "Age", "lang",
              "Staleness-", "Commits+", "Contributors+"]
    rows = [[fmt(stars[i]), fmt(forks[i]), fmt(watchers[i]), fmt(age[i]),
             lang[i], fmt(staleness[i]), fmt(commits[i]), fmt(contributors[i])]
            for i in range(n)]
    return header, rows


# ----------------------------------------------------------------- roster


def build_corpus() -> dict[str, tuple[list[str], list[list]]]:
    corpus: dict[str, tuple[list[str], list[list]]] = {}
    print("pom3a:")
    corpus["pom3a"] = calibrate_pom3a(seed=20260819)
    corpus["pom3b"] = gen_pom3(seed=2, mid_a=4.4, mid_b=4.6, elite_count=14)
    corpus["pom3c"] = gen_pom3(seed=3, mid_a=3.2, mid_b=4.8, elite_count=16)
    corpus["pom3d"] = gen_pom3(seed=4, mid_a=5.0, mid_b=6.2, elite_count=12)
    corpus["SS-A"] = gen_ss(seed=11, n=1343, elite_count=20,
                            x_names=["Spouts", "Splitters", "Counters"],
                            goal_specs=[("Throughput+", False), ("Latency-", True)])
    corpus["SS-B"] = gen_ss(seed=12, n=206,
                            x_names=["Spouts", "Splitters", "Counters"],
                            goal_specs=[("Latency-", True), ("Energy-", True)])
    corpus["SS-C"] = gen_ss(seed=13, n=1512, elite_count=22,
                            x_names=["Buffer", "Heap", "Threads"],
                            goal_specs=[("Throughput+", False), ("Latency-", True)])
    corpus["SS-D"] = gen_ss(seed=14, n=196,
                            x_names=["Buffer", "Heap", "Threads"],
                            goal_specs=[("Throughput+", False), ("Latency-", True)])
    corpus["SS-E"] = gen_ss(seed=15, n=756, elite_count=16,
                            x_names=["Workers", "Batch", "Spread"],
                            goal_specs=[("Throughput+", False), ("Latency-", True)])
    corpus["SS-H"] = gen_ss(seed=18, n=259,
                            x_names=["Workers", "Batch", "Spread", "Retries"],
                            goal_specs=[("Runtime-", True), ("Memory-", True)])
    corpus["auto93"] = gen_auto93(seed=93)
    corpus["wine"] = gen_wine(seed=1599)
    corpus["china"] = gen_china(seed=499)
    corpus["commits-0"] = gen_commits(seed=10000)
    return corpus


def probe(out_dir: Path) -> None:
    """Quick optimizer spot-checks on the flagship dataset."""
    import random as pyrandom
    from statistics import median

    from frugalopt import LiteOptimizer, RandomSearch, load_csv

    data = load_csv(out_dir / "pom3a.csv")
    lite = [LiteOptimizer(budget=30, random_state=s).fit(data).best_d2h_
            for s in range(20)]
    rand50 = [RandomSearch(budget=50, random_state=s).fit(data).best_d2h_
              for s in range(20)]
    rand10 = [RandomSearch(budget=10, random_state=s).fit(data).best_d2h_
              for s in range(20)]
    print(f"  lite-certain@30 median best-d2h: {median(lite):.3f}")
    print(f"  random@50       median best-d2h: {median(rand50):.3f}")
    print(f"  random@10       median best-d2h: {median(rand10):.3f}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data", help="output directory")
    parser.add_argument("--probe", action="store_true",
                        help="run optimizer spot-checks after generating")
    args = parser.parse_args(argv)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in build_corpus().items():
        d = np.sort(d2h_stats(header, rows))
        path = out_dir / f"{name}.csv"
        write_csv(path, header, rows)
        print(f"  wrote {path}  rows={len(rows)} cols={len(header)} "
              f"d2h median={nearest_rank(d, 0.5):.3f} "
              f"iqr={nearest_rank(d, 0.75) - nearest_rank(d, 0.25):.3f} "
              f"min={d[0]:.3f}")
    if args.probe:
        print("probe:")
        probe(out_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
