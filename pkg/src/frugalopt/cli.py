"""Command-line front door: run experiments, render reports, serve reviews."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import Config
from .harness import (ALGORITHMS, DEFAULT_BUDGETS, ExperimentPlan,
                      records_from_csv, records_to_csv, render_report,
                      run_experiment)


def dataset_paths(data: str) -> list[str]:
    """A directory means every .csv inside it; a file means itself."""
    p = Path(data)
    if p.is_dir():
        return sorted(str(f) for f in p.glob("*.csv"))
    return [str(p)]


def cmd_run(args: argparse.Namespace) -> int:
    paths = dataset_paths(args.data)
    if not paths:
        print(f"no datasets found under {args.data}", file=sys.stderr)
        return 1
    config = None if args.stop is None else Config(stop=args.stop)
    plan = ExperimentPlan(
        datasets=tuple(paths),
        algorithms=tuple(args.algo.split(",")),
        budgets=tuple(int(b) for b in args.budget.split(",")),
        repeats=args.repeats,
        seed=args.seed,
        config=config,
    )
    records = run_experiment(plan)
    if not records:
        print("no runs completed", file=sys.stderr)
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = out / "results.csv"
    results.write_text(records_to_csv(records))
    failed = sum(1 for r in records if r.status != "ok")
    print(f"wrote {results} ({len(records)} records, {failed} failed)")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    path = Path(args.indir)
    if path.is_dir():
        path = path / "results.csv"
    if not path.exists():
        print(f"no results file at {path}", file=sys.stderr)
        return 1
    records = records_from_csv(path.read_text())
    print(render_report(records, table6=args.table6))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data, journal_dir=args.sessions)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frugalopt",
        description="Label-frugal multi-objective optimization over tabular data.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run treatments over datasets")
    run_p.add_argument("--data", required=True,
                       help="dataset .csv file or a directory of them")
    run_p.add_argument("--algo", default=",".join(ALGORITHMS),
                       help="comma-separated subset of: " + ",".join(ALGORITHMS))
    run_p.add_argument("--budget",
                       default=",".join(str(b) for b in DEFAULT_BUDGETS),
                       help="comma-separated label budgets")
    run_p.add_argument("--repeats", type=int, default=20)
    run_p.add_argument("--seed", type=int, default=1, help="master seed")
    run_p.add_argument("--out", default="results", help="output directory")
    run_p.add_argument("--stop", type=float, default=None,
                       help="recursive-split stop exponent "
                            "(cluster floor is 2*N**stop); default 0.5")
    run_p.set_defaults(handler=cmd_run)

    rep_p = sub.add_parser("report", help="render rank tables from results")
    rep_p.add_argument("--in", dest="indir", required=True,
                       help="results directory or results.csv path")
    rep_p.add_argument("--table6", action="store_true",
                       help="add the cross-dataset summary")
    rep_p.set_defaults(handler=cmd_report)

    srv_p = sub.add_parser("serve", help="start the interactive review service")
    srv_p.add_argument("--port", type=int, default=8000)
    srv_p.add_argument("--host", default="127.0.0.1")
    srv_p.add_argument("--data", required=True, help="directory of dataset .csv files")
    srv_p.add_argument("--sessions", default=None,
                       help="directory for session journals (default: DATA/.sessions)")
    srv_p.set_defaults(handler=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
