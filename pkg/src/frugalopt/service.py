"""Interactive review sessions over HTTP: a human is the labeling oracle.

Each session runs the very same acquisition loop as the batch harness on a
worker thread; the only difference is the oracle.  When the loop wants a
label it blocks, the pending row surfaces through the API, and the loop
resumes once a human (or an automated client) posts the goal values.  A
client that always answers with the dataset's stored goals therefore
reproduces the cached-oracle run bit for bit.

Sessions append every accepted label to a journal file; on restart the
journals replay through the same loop, reconstructing identical state.
Finished sessions additionally persist a model snapshot that can rescore
new rows later without any further labeling (see score_rows).

Wire format: JSON over HTTP, missing cells encoded as null, and every
response carries a schema_version field.
"""
from __future__ import annotations

import json
import random
import re
import secrets
import sys
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Annotated, Any, Optional, Sequence

from fastapi import FastAPI
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .acquisition import (
    Candidate,
    LiteResult,
    get_policy,
    incumbent_trajectory,
    lite_run,
    split_best_rest,
)
from .config import Config
from .oracle import (
    InteractiveOracle,
    Oracle,
    SessionClosed,
    StaleRequest,
    masked_view,
)
from .tabular import MISSING, Dataset, Row, add_row, clone, d2h, load_csv, loglike_row
from .validation import check_budget, check_dataset

SCHEMA_VERSION = 1

_DEFAULT = Config()
_NAME_RE = re.compile(r"[A-Za-z0-9_-]+")
_SETTLE_TIMEOUT = 30.0  # seconds to wait for the loop to surface a candidate


def _json_cells(cells: Sequence[Any]) -> list[Any]:
    return [None if v is MISSING else v for v in cells]


def _rows_from_json(names: Sequence[str], cells_list: Sequence[Sequence[Any]]) -> Dataset:
    ds = Dataset(list(names))
    for cells in cells_list:
        if len(cells) != len(names):
            raise ValueError(f"row has {len(cells)} cells, header has {len(names)}")
        add_row(ds, Row([MISSING if v is None else v for v in cells], ident=-1))
    return ds


def score_rows(snapshot: dict, rows: Sequence[Sequence[Any]]) -> list[float]:
    """Score candidate rows against a persisted session snapshot.

    Rebuilds the frozen best/rest model from the snapshot's raw rows and
    returns B - R (log-likelihood of membership in the best class minus the
    rest class) per row; goal cells may be null.  Matches the scores the
    live session would have produced at its end.
    """
    names = snapshot["names"]
    best = _rows_from_json(names, snapshot["model_rows"]["best"])
    rest = _rows_from_json(names, snapshot["model_rows"]["rest"])
    nall = snapshot["labels_used"]
    m, k = snapshot["m"], snapshot["k"]
    out = []
    for cells in rows:
        row = Row([MISSING if v is None else v for v in cells], ident=-1)
        out.append(loglike_row(best, row, nall, 2, m=m, k=k)
                   - loglike_row(rest, row, nall, 2, m=m, k=k))
    return out


class LiveSession:
    """One labeling session: the loop on a worker thread, labels over HTTP.

    All mutable state is guarded by one condition variable, shared with the
    session's interactive oracle, so within a session mutations serialize
    and readers always see a consistent snapshot.
    """

    def __init__(self, session_id: str, dataset_name: str, data: Dataset,
                 policy: str, budget: int, seed: int, simulate: bool,
                 cfg: Config, journal_path: Optional[Path] = None,
                 preload: Optional[Sequence[Sequence[float]]] = None):
        self.id = session_id
        self.dataset_name = dataset_name
        self.policy = policy
        self.budget = budget
        self.seed = seed
        self.simulate = simulate
        self.cfg = cfg
        self.journal_path = journal_path
        self.cond = threading.Condition()
        view, cached = masked_view(data)
        self.view = view
        if simulate:
            self.oracle: Oracle = cached
        else:
            self.oracle = InteractiveOracle(
                goal_positions=[col.position for col in data.y],
                preload=preload, cond=self.cond)
        self._candidate: Optional[Candidate] = None
        self.result: Optional[LiteResult] = None
        self.error: Optional[str] = None
        self.finished = False
        self._thread = threading.Thread(target=self._work, daemon=True,
                                        name=f"review-session-{session_id}")

    # ------------------------------------------------------------ lifecycle

    def start(self) -> None:
        self._thread.start()

    def close(self) -> None:
        """Stop the session; an in-flight labeling aborts the loop."""
        if isinstance(self.oracle, InteractiveOracle):
            self.oracle.close()
        self._thread.join(timeout=5)

    def _work(self) -> None:
        try:
            result = lite_run(self.view, self.oracle, self.budget, self.policy,
                              random.Random(self.seed), cfg=self.cfg,
                              on_candidate=self._on_candidate)
            if not result.aborted:
                self._persist_snapshot(result)
            with self.cond:
                self.result = result
                self.finished = True
                self._candidate = None
                self.cond.notify_all()
        except Exception as exc:  # surface algorithm errors to the API
            with self.cond:
                self.error = f"{type(exc).__name__}: {exc}"
                self.finished = True
                self._candidate = None
                self.cond.notify_all()

    def _on_candidate(self, candidate: Candidate, labels_used: int) -> None:
        with self.cond:
            self._candidate = candidate
            self.cond.notify_all()

    # ------------------------------------------------------------- journal

    def _journal(self, record: dict) -> None:
        if self.journal_path is None:
            return
        with self.journal_path.open("a") as fh:
            fh.write(json.dumps(record) + "\n")

    def write_journal_header(self) -> None:
        self._journal({"schema_version": SCHEMA_VERSION, "id": self.id,
                       "dataset": self.dataset_name, "policy": self.policy,
                       "budget": self.budget, "seed": self.seed,
                       "simulate": self.simulate,
                       "created": datetime.now(timezone.utc).isoformat()})

    def journal_label(self, ident: int, goals: Sequence[float]) -> None:
        self._journal({"ident": ident, "goals": [float(g) for g in goals]})

    # ------------------------------------------------------------ queries

    def _awaiting(self) -> bool:
        """True when a candidate is surfaced and the loop blocks on it."""
        if self.simulate or self.finished or self._candidate is None:
            return False
        pending = self.oracle.pending()
        return pending is not None and pending.ident == self._candidate.row.ident

    def wait_settled(self, timeout: float = _SETTLE_TIMEOUT) -> None:
        """Block until the loop finished or a candidate awaits its label."""
        with self.cond:
            self.cond.wait_for(lambda: self.finished or self._awaiting(), timeout)

    @property
    def state(self) -> str:
        with self.cond:
            if self.finished:
                return "finished"
            return "awaiting-label" if self._awaiting() else "idle"

    def labeled_in_order(self) -> list[Row]:
        return [lr.row for lr in self.oracle.labeled_rows()]

    def summary(self) -> dict:
        rows = self.labeled_in_order()
        payload = {
            "schema_version": SCHEMA_VERSION,
            "id": self.id,
            "dataset": self.dataset_name,
            "algorithm": "lite",
            "policy": self.policy,
            "budget": self.budget,
            "seed": self.seed,
            "simulate": self.simulate,
            "state": self.state,
            "labels_used": len(rows),
            "aborted": bool(self.result.aborted) if self.result else False,
            "error": self.error,
            "incumbent": None,
            "trajectory": [],
        }
        if rows:
            frame = clone(self.view, rows)
            best = min(rows, key=lambda r: d2h(frame, r))
            payload["incumbent"] = {"ident": best.ident,
                                    "cells": _json_cells(best.cells),
                                    "d2h": d2h(frame, best)}
            payload["trajectory"] = [[used, value] for used, value
                                     in incumbent_trajectory(frame, rows)]
        return payload

    def candidate_payload(self) -> Optional[dict]:
        with self.cond:
            if not self._awaiting():
                return None
            candidate = self._candidate
        x_values = {}
        for col in self.view.x:
            v = candidate.row.cells[col.position]
            x_values[col.name] = None if v is MISSING else v
        used = len(self.labeled_in_order())
        return {
            "ident": candidate.row.ident,
            "seed": candidate.seed,
            "x": x_values,
            "b": candidate.b,
            "r": candidate.r,
            "score": candidate.score,
            "labels_used": used,
            "budget_remaining": self.budget - used,
        }

    def report(self) -> dict:
        rows = self.labeled_in_order()
        payload = {
            "schema_version": SCHEMA_VERSION,
            "session": self.summary(),
            "model": None,
            "history": [],
        }
        if rows:
            frame = clone(self.view, rows)
            payload["history"] = [{"ident": r.ident,
                                   "cells": _json_cells(r.cells),
                                   "d2h": d2h(frame, r)} for r in rows]
        if len(rows) >= 2:
            best_ds, rest_ds = split_best_rest(clone(self.view, rows, order=True),
                                               self.cfg)
            payload["model"] = {"best": _column_summaries(best_ds),
                                "rest": _column_summaries(rest_ds)}
        return payload

    # ----------------------------------------------------------- snapshot

    def snapshot_path(self) -> Optional[Path]:
        if self.journal_path is None:
            return None
        return self.journal_path.with_suffix(".json")

    def _persist_snapshot(self, result: LiteResult) -> None:
        path = self.snapshot_path()
        if path is None or result.model is None:
            return
        best_ds, rest_ds = result.model
        snap = self.report()
        snap["session"]["state"] = "finished"  # written just before the flag flips
        snap["names"] = list(self.view.names)
        snap["labels_used"] = result.labels_used
        snap["m"] = self.cfg.m
        snap["k"] = self.cfg.k
        snap["model_rows"] = {
            "best": [_json_cells(r.cells) for r in best_ds.rows],
            "rest": [_json_cells(r.cells) for r in rest_ds.rows],
        }
        path.write_text(json.dumps(snap))


def _column_summaries(ds: Dataset) -> list[dict]:
    out = []
    for col in ds.cols:
        if col.is_num:
            empty = col.n == 0
            out.append({"name": col.name, "kind": "num", "n": col.n,
                        "mu": None if empty else col.mu,
                        "sd": None if empty else col.sd,
                        "lo": None if empty else col.lo,
                        "hi": None if empty else col.hi})
        else:
            top = sorted(col.counts.items(), key=lambda kv: (-kv[1], kv[0]))[:5]
            out.append({"name": col.name, "kind": "sym", "n": col.n,
                        "top": [[value, count] for value, count in top]})
    return out


def _dataset_descriptor(name: str, ds: Dataset) -> dict:
    goal_positions = {col.position for col in ds.y}
    columns = []
    for col in ds.cols:
        is_goal = col.position in goal_positions
        columns.append({
            "name": col.name,
            "kind": "num" if col.is_num else "sym",
            "role": "y" if is_goal else "x",
            "goal": None if not is_goal else ("max" if col.heaven == 1.0 else "min"),
        })
    return {"name": name, "rows": len(ds.rows), "columns": columns}


@dataclass
class ServiceState:
    data_dir: Path
    journal_dir: Path
    cfg: Config
    datasets: dict[str, Dataset] = field(default_factory=dict)
    sessions: dict[str, LiveSession] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionCreate(BaseModel):
    dataset: str
    algorithm: str = "lite"
    policy: str = "certain"
    budget: int
    seed: int = 0
    simulate: bool = False


class LabelSubmit(BaseModel):
    ident: int
    goals: list[Annotated[float, Field(allow_inf_nan=False)]]


class DatasetUpload(BaseModel):
    name: str
    content: str


def _error(status: int, message: str, **extra: Any) -> JSONResponse:
    return JSONResponse({"schema_version": SCHEMA_VERSION, "error": message, **extra},
                        status_code=status)


def _load_data_dir(state: ServiceState) -> None:
    for path in sorted(state.data_dir.glob("*.csv")):
        try:
            state.datasets[path.stem] = load_csv(path)
        except (ValueError, OSError) as exc:
            print(f"skipping {path}: {exc}", file=sys.stderr)


def _replay_journals(state: ServiceState) -> None:
    for path in sorted(state.journal_dir.glob("*.jsonl")):
        try:
            lines = [json.loads(line) for line in path.read_text().splitlines()
                     if line.strip()]
        except (json.JSONDecodeError, OSError) as exc:
            print(f"skipping journal {path}: {exc}", file=sys.stderr)
            continue
        if not lines:
            continue
        head = lines[0]
        data = state.datasets.get(head.get("dataset"))
        if data is None:
            print(f"skipping journal {path}: unknown dataset {head.get('dataset')!r}",
                  file=sys.stderr)
            continue
        session = LiveSession(head["id"], head["dataset"], data, head["policy"],
                              head["budget"], head["seed"], head["simulate"],
                              state.cfg, journal_path=path,
                              preload=[rec["goals"] for rec in lines[1:]])
        state.sessions[session.id] = session
        session.start()


def create_app(data_dir: str, journal_dir: Optional[str] = None,
               config: Optional[Config] = None,
               static_dir: Optional[str] = None) -> FastAPI:
    """Build the review service over the datasets in ``data_dir``.

    Session journals and snapshots live in ``journal_dir`` (default: a
    ``.sessions`` directory inside ``data_dir``); existing journals replay
    on startup so sessions survive restarts.
    """
    state = ServiceState(
        data_dir=Path(data_dir),
        journal_dir=(Path(journal_dir) if journal_dir is not None
                     else Path(data_dir) / ".sessions"),
        cfg=config or _DEFAULT,
    )
    state.journal_dir.mkdir(parents=True, exist_ok=True)
    _load_data_dir(state)
    _replay_journals(state)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        for session in list(state.sessions.values()):
            session.close()

    app = FastAPI(title="frugalopt review service", lifespan=lifespan)
    app.state.service = state

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request, exc):
        return _error(422, "invalid request body",
                      details=jsonable_encoder(exc.errors()))

    def find_session(session_id: str) -> Optional[LiveSession]:
        with state.lock:
            return state.sessions.get(session_id)

    @app.post("/api/sessions", status_code=201)
    def create_session(body: SessionCreate):
        data = state.datasets.get(body.dataset)
        if data is None:
            return _error(404, f"unknown dataset {body.dataset!r}")
        if body.algorithm != "lite":
            return _error(400, f"unknown algorithm {body.algorithm!r}; "
                               "this service runs 'lite'")
        try:
            get_policy(body.policy)
            check_dataset(data, min_rows=state.cfg.start + 3)
            check_budget(body.budget, state.cfg.start + 1, data)
        except ValueError as exc:
            return _error(400, str(exc))
        session_id = secrets.token_hex(8)
        session = LiveSession(session_id, body.dataset, data, body.policy,
                              body.budget, body.seed, body.simulate, state.cfg,
                              journal_path=state.journal_dir / f"{session_id}.jsonl")
        session.write_journal_header()
        with state.lock:
            state.sessions[session_id] = session
        session.start()
        session.wait_settled()
        return session.summary()

    @app.get("/api/sessions/{session_id}/candidate")
    def get_candidate(session_id: str):
        session = find_session(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id!r}")
        session.wait_settled()
        payload = session.candidate_payload()
        if payload is None:
            return _error(409, "no pending candidate", state=session.state)
        return {"schema_version": SCHEMA_VERSION, "session_id": session_id,
                "state": "awaiting-label", "candidate": payload}

    @app.post("/api/sessions/{session_id}/label")
    def submit_label(session_id: str, body: LabelSubmit):
        session = find_session(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id!r}")
        if session.simulate:
            return _error(409, "simulated session labels itself", state=session.state)
        if len(body.goals) != len(session.view.y):
            return _error(400, f"expected {len(session.view.y)} goal values, "
                               f"got {len(body.goals)}")
        with session.cond:
            session.cond.wait_for(lambda: session.finished or session._awaiting(),
                                  _SETTLE_TIMEOUT)
            if session.finished:
                return _error(409, "session is finished", state=session.state)
            pending = session.oracle.pending()
            if pending is None:
                return _error(409, "no pending candidate", state=session.state)
            if pending.ident != body.ident:
                return _error(409, f"row {body.ident} is not the pending candidate",
                              pending=pending.ident)
            before = session.oracle.label_count
            session.journal_label(body.ident, body.goals)
            try:
                session.oracle.answer(body.ident, body.goals)
            except (StaleRequest, SessionClosed) as exc:
                return _error(409, str(exc))
            session.cond.wait_for(
                lambda: session.finished or session.oracle.label_count > before,
                _SETTLE_TIMEOUT)
        return session.summary()

    @app.get("/api/sessions/{session_id}/report")
    def get_report(session_id: str):
        session = find_session(session_id)
        if session is None:
            return _error(404, f"unknown session {session_id!r}")
        return session.report()

    @app.get("/api/datasets")
    def list_datasets():
        with state.lock:
            items = [_dataset_descriptor(name, ds)
                     for name, ds in sorted(state.datasets.items())]
        return {"schema_version": SCHEMA_VERSION, "datasets": items}

    @app.post("/api/datasets", status_code=201)
    def upload_dataset(body: DatasetUpload):
        if not _NAME_RE.fullmatch(body.name):
            return _error(400, "dataset name must match [A-Za-z0-9_-]+")
        path = state.data_dir / f"{body.name}.csv"
        with state.lock:
            if body.name in state.datasets or path.exists():
                return _error(409, f"dataset {body.name!r} already exists")
        path.write_text(body.content)
        try:
            ds = load_csv(path)
            check_dataset(ds, min_rows=state.cfg.start + 3)
        except (ValueError, OSError) as exc:
            path.unlink(missing_ok=True)
            return _error(400, f"invalid dataset: {exc}")
        with state.lock:
            state.datasets[body.name] = ds
        return {"schema_version": SCHEMA_VERSION,
                "dataset": _dataset_descriptor(body.name, ds)}

    static = (Path(static_dir) if static_dir is not None
              else Path(__file__).resolve().parents[2] / "frontend" / "dist")
    if static.is_dir():
        app.mount("/", StaticFiles(directory=static, html=True), name="ui")

    return app
