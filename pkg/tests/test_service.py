"""The review service: sessions over HTTP with a human in the labeling loop."""
from __future__ import annotations

import json
import random

import pytest
from fastapi.testclient import TestClient

from frugalopt.acquisition import incumbent_trajectory, lite_run
from frugalopt.oracle import masked_view
from frugalopt.service import SCHEMA_VERSION, create_app, score_rows
from frugalopt.tabular import MISSING, clone, d2h, load_csv, loglike_row

from conftest import AUTO_HEADER, NINE_CARS, make_dataset


def write_csv(path, names, rows):
    lines = [",".join(names)]
    for cells in rows:
        lines.append(",".join("?" if v is MISSING else str(v) for v in cells))
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def service(tmp_path):
    """A fresh app over two datasets: the nine cars and a 80-row synthetic."""
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    write_csv(data_dir / "cars.csv", AUTO_HEADER, NINE_CARS)
    medium = make_dataset(seed=5, n=80)
    write_csv(data_dir / "medium.csv", medium.names,
              [row.cells for row in medium.rows])
    app = create_app(str(data_dir), journal_dir=str(tmp_path / "journals"))
    with TestClient(app) as client:
        yield client, tmp_path


def true_goals(data_dir, name):
    """ident -> stored goal values, for clients that answer with the truth."""
    data = load_csv(str(data_dir / "data" / f"{name}.csv"))
    positions = [col.position for col in data.y]
    return {row.ident: [row.cells[p] for p in positions]
            for row in data.rows}, data


def drive(client, session_id, goals_by_ident):
    """Answer every candidate with its stored goals until the session ends."""
    summary = None
    while True:
        got = client.get(f"/api/sessions/{session_id}/candidate")
        if got.status_code == 409:
            assert got.json()["state"] == "finished"
            return summary
        ident = got.json()["candidate"]["ident"]
        posted = client.post(f"/api/sessions/{session_id}/label",
                             json={"ident": ident, "goals": goals_by_ident[ident]})
        assert posted.status_code == 200, posted.text
        summary = posted.json()


# ----------------------------------------------------------- dataset listing

def test_lists_datasets_with_roles_and_goals(service):
    client, _ = service
    got = client.get("/api/datasets")
    assert got.status_code == 200
    body = got.json()
    assert body["schema_version"] == SCHEMA_VERSION
    by_name = {d["name"]: d for d in body["datasets"]}
    assert set(by_name) == {"cars", "medium"}
    cars = by_name["cars"]
    assert cars["rows"] == 9
    roles = {c["name"]: (c["role"], c["goal"]) for c in cars["columns"]}
    assert roles["Clndrs"] == ("x", None)
    assert roles["Lbs-"] == ("y", "min")
    assert roles["Acc+"] == ("y", "max")


# ----------------------------------------------------------- session creation

def test_create_rejects_unknown_dataset(service):
    client, _ = service
    got = client.post("/api/sessions", json={"dataset": "nope", "budget": 6})
    assert got.status_code == 404
    assert got.json()["schema_version"] == SCHEMA_VERSION


def test_create_rejects_bad_requests(service):
    client, _ = service
    cases = [
        {"dataset": "cars", "budget": 3},                       # below minimum
        {"dataset": "cars", "budget": 50},                      # above row count
        {"dataset": "cars", "budget": 6, "policy": "bogus"},
        {"dataset": "cars", "budget": 6, "algorithm": "sway"},  # not interactive
    ]
    for body in cases:
        got = client.post("/api/sessions", json=body)
        assert got.status_code == 400, body
        assert "error" in got.json()


def test_create_rejects_malformed_body(service):
    client, _ = service
    got = client.post("/api/sessions", json={"dataset": "cars"})
    assert got.status_code == 422
    assert got.json()["schema_version"] == SCHEMA_VERSION
    assert got.json()["details"]


def test_new_session_awaits_first_seed_row(service):
    client, _ = service
    got = client.post("/api/sessions",
                      json={"dataset": "cars", "budget": 6, "seed": 2})
    assert got.status_code == 201
    body = got.json()
    assert body["state"] == "awaiting-label"
    assert body["labels_used"] == 0
    assert body["incumbent"] is None
    assert body["trajectory"] == []

    got = client.get(f"/api/sessions/{body['id']}/candidate")
    candidate = got.json()["candidate"]
    assert candidate["seed"] is True
    assert candidate["score"] is None and candidate["b"] is None
    assert set(candidate["x"]) == {"Clndrs", "Volume", "Model", "origin"}
    assert candidate["budget_remaining"] == 6


def test_candidate_reads_are_idempotent(service):
    client, _ = service
    session = client.post("/api/sessions",
                          json={"dataset": "cars", "budget": 6, "seed": 2}).json()
    first = client.get(f"/api/sessions/{session['id']}/candidate").json()
    second = client.get(f"/api/sessions/{session['id']}/candidate").json()
    assert first == second


# ----------------------------------------------------------------- labeling

def test_label_flow_runs_to_budget(service):
    client, tmp = service
    goals, _ = true_goals(tmp, "medium")
    session = client.post("/api/sessions",
                          json={"dataset": "medium", "budget": 9, "seed": 7}).json()
    seen = 0
    while True:
        got = client.get(f"/api/sessions/{session['id']}/candidate")
        if got.status_code == 409:
            break
        candidate = got.json()["candidate"]
        assert candidate["labels_used"] == seen
        posted = client.post(f"/api/sessions/{session['id']}/label",
                             json={"ident": candidate["ident"],
                                   "goals": goals[candidate["ident"]]})
        assert posted.status_code == 200
        summary = posted.json()
        seen += 1
        assert summary["labels_used"] == seen
        assert summary["incumbent"]["d2h"] >= 0.0
        trajectory = summary["trajectory"]
        assert trajectory[-1][0] == seen
        assert all(a[1] >= b[1] for a, b in zip(trajectory, trajectory[1:]))
    assert seen == 9
    assert summary["state"] == "finished"


def test_label_after_finish_conflicts(service):
    client, tmp = service
    goals, _ = true_goals(tmp, "cars")
    session = client.post("/api/sessions",
                          json={"dataset": "cars", "budget": 5, "seed": 1}).json()
    drive(client, session["id"], goals)
    got = client.post(f"/api/sessions/{session['id']}/label",
                      json={"ident": 0, "goals": [1.0, 2.0, 3.0]})
    assert got.status_code == 409
    assert got.json()["state"] == "finished"


def test_label_rejections(service):
    client, _ = service
    session = client.post("/api/sessions",
                          json={"dataset": "cars", "budget": 6, "seed": 2}).json()
    pending = client.get(f"/api/sessions/{session['id']}/candidate")
    ident = pending.json()["candidate"]["ident"]

    stale = client.post(f"/api/sessions/{session['id']}/label",
                        json={"ident": ident + 1, "goals": [1.0, 2.0, 3.0]})
    assert stale.status_code == 409
    assert stale.json()["pending"] == ident

    arity = client.post(f"/api/sessions/{session['id']}/label",
                        json={"ident": ident, "goals": [1.0, 2.0]})
    assert arity.status_code == 400

    nan = client.post(f"/api/sessions/{session['id']}/label",
                      json={"ident": ident, "goals": ["nan", 2.0, 3.0]})
    assert nan.status_code == 422

    missing = client.post("/api/sessions/zzzz/label",
                          json={"ident": 0, "goals": [1.0, 2.0, 3.0]})
    assert missing.status_code == 404

    # none of the rejected submissions consumed the pending candidate
    again = client.get(f"/api/sessions/{session['id']}/candidate")
    assert again.json()["candidate"]["ident"] == ident


def test_simulated_session_autocompletes(service):
    client, _ = service
    got = client.post("/api/sessions", json={"dataset": "medium", "budget": 12,
                                             "seed": 4, "simulate": True})
    body = got.json()
    assert body["state"] == "finished"
    assert body["labels_used"] == 12
    assert body["incumbent"] is not None
    rejected = client.post(f"/api/sessions/{body['id']}/label",
                           json={"ident": 0, "goals": [1.0, 2.0]})
    assert rejected.status_code == 409


# ------------------------------------------------------------------- report

def test_fresh_session_reports_empty_model(service):
    client, _ = service
    session = client.post("/api/sessions",
                          json={"dataset": "cars", "budget": 6, "seed": 2}).json()
    report = client.get(f"/api/sessions/{session['id']}/report").json()
    assert report["model"] is None
    assert report["history"] == []
    assert report["session"]["trajectory"] == []


def test_finished_session_reports_model_and_history(service):
    client, tmp = service
    goals, _ = true_goals(tmp, "medium")
    session = client.post("/api/sessions",
                          json={"dataset": "medium", "budget": 10, "seed": 3}).json()
    drive(client, session["id"], goals)
    report = client.get(f"/api/sessions/{session['id']}/report").json()
    assert len(report["history"]) == 10
    model = report["model"]
    best_n = {c["name"]: c["n"] for c in model["best"]}
    rest_n = {c["name"]: c["n"] for c in model["rest"]}
    assert best_n["Size"] + rest_n["Size"] == 10
    for col in model["best"]:
        if col["kind"] == "num":
            assert set(col) == {"name", "kind", "n", "mu", "sd", "lo", "hi"}
        else:
            assert set(col) == {"name", "kind", "n", "top"}
            assert all(isinstance(count, int) for _, count in col["top"])


# ----------------------------------------------- transparency and persistence

@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_http_session_matches_cached_run_exactly(service, seed):
    """Answering with stored goals reproduces the in-process run bit for bit."""
    client, tmp = service
    goals, data = true_goals(tmp, "medium")
    session = client.post("/api/sessions", json={"dataset": "medium", "budget": 10,
                                                 "seed": seed}).json()
    summary = drive(client, session["id"], goals)
    report = client.get(f"/api/sessions/{session['id']}/report").json()

    view, oracle = masked_view(data)
    result = lite_run(view, oracle, 10, "certain", random.Random(seed))
    rows = [lr.row for lr in oracle.labeled_rows()]
    frame = clone(view, rows)

    assert [h["ident"] for h in report["history"]] == [r.ident for r in rows]
    assert summary["incumbent"]["d2h"] == d2h(frame, result.best_row.row)
    assert summary["trajectory"] == [list(p) for p in incumbent_trajectory(frame, rows)]
    best_ds, rest_ds = result.model
    for got_cols, ref in ((report["model"]["best"], best_ds),
                          (report["model"]["rest"], rest_ds)):
        for col_json, col in zip(got_cols, ref.cols):
            if col.is_num:
                assert col_json["mu"] == col.mu and col_json["sd"] == col.sd
            else:
                assert dict((v, c) for v, c in col_json["top"]) == dict(
                    sorted(col.counts.items(), key=lambda kv: (-kv[1], kv[0]))[:5])


def test_snapshot_persists_and_rescored_rows_match(service):
    client, tmp = service
    goals, data = true_goals(tmp, "medium")
    session = client.post("/api/sessions", json={"dataset": "medium", "budget": 10,
                                                 "seed": 11}).json()
    drive(client, session["id"], goals)
    snap_path = tmp / "journals" / f"{session['id']}.json"
    assert snap_path.exists()
    snapshot = json.loads(snap_path.read_text())
    assert snapshot["session"]["state"] == "finished"
    assert snapshot["labels_used"] == 10

    view, oracle = masked_view(data)
    result = lite_run(view, oracle, 10, "certain", random.Random(11))
    best_ds, rest_ds = result.model
    probe = [row.cells for row in data.rows[:6]]
    want = [loglike_row(best_ds, row, 10, 2) - loglike_row(rest_ds, row, 10, 2)
            for row in data.rows[:6]]
    assert score_rows(snapshot, probe) == want


def test_journal_replay_restores_finished_session(service):
    client, tmp = service
    goals, _ = true_goals(tmp, "medium")
    session = client.post("/api/sessions", json={"dataset": "medium", "budget": 8,
                                                 "seed": 9}).json()
    drive(client, session["id"], goals)
    before = client.get(f"/api/sessions/{session['id']}/report").json()

    reborn = create_app(str(tmp / "data"), journal_dir=str(tmp / "journals"))
    with TestClient(reborn) as client2:
        after = client2.get(f"/api/sessions/{session['id']}/report").json()
    assert after == before
    assert after["session"]["state"] == "finished"


def test_journal_replay_resumes_partial_session(service):
    client, tmp = service
    goals, _ = true_goals(tmp, "medium")
    session = client.post("/api/sessions", json={"dataset": "medium", "budget": 8,
                                                 "seed": 9}).json()
    labeled = []
    for _ in range(3):
        candidate = client.get(
            f"/api/sessions/{session['id']}/candidate").json()["candidate"]
        labeled.append(candidate["ident"])
        client.post(f"/api/sessions/{session['id']}/label",
                    json={"ident": candidate["ident"],
                          "goals": goals[candidate["ident"]]})
    next_up = client.get(f"/api/sessions/{session['id']}/candidate").json()

    reborn = create_app(str(tmp / "data"), journal_dir=str(tmp / "journals"))
    with TestClient(reborn) as client2:
        got = client2.get(f"/api/sessions/{session['id']}/candidate").json()
        assert got["candidate"] == next_up["candidate"]
        report = client2.get(f"/api/sessions/{session['id']}/report").json()
        assert report["session"]["labels_used"] == 3
        assert [h["ident"] for h in report["history"]] == labeled
        summary = drive(client2, session["id"], goals)
        assert summary["labels_used"] == 8


def test_sessions_are_independent(service):
    client, tmp = service
    goals, _ = true_goals(tmp, "medium")
    one = client.post("/api/sessions", json={"dataset": "medium", "budget": 6,
                                             "seed": 1}).json()
    two = client.post("/api/sessions", json={"dataset": "cars", "budget": 5,
                                             "seed": 1}).json()
    cars_goals, _ = true_goals(tmp, "cars")
    drive(client, two["id"], cars_goals)
    pending = client.get(f"/api/sessions/{one['id']}/candidate")
    assert pending.status_code == 200
    drive(client, one["id"], goals)
    for sid in (one["id"], two["id"]):
        report = client.get(f"/api/sessions/{sid}/report").json()
        assert report["session"]["state"] == "finished"


# ------------------------------------------------------------------- uploads

def test_upload_then_optimize(service):
    client, _ = service
    extra = make_dataset(seed=21, n=40)
    lines = [",".join(extra.names)]
    for row in extra.rows:
        lines.append(",".join(str(v) for v in row.cells))
    got = client.post("/api/datasets", json={"name": "fresh",
                                             "content": "\n".join(lines)})
    assert got.status_code == 201
    assert got.json()["dataset"]["rows"] == 40
    names = [d["name"] for d in client.get("/api/datasets").json()["datasets"]]
    assert "fresh" in names
    session = client.post("/api/sessions", json={"dataset": "fresh", "budget": 6,
                                                 "seed": 1, "simulate": True})
    assert session.status_code == 201
    assert session.json()["state"] == "finished"


def test_upload_rejections(service):
    client, tmp = service
    dup = client.post("/api/datasets", json={"name": "cars", "content": "x\n1\n"})
    assert dup.status_code == 409
    bad_name = client.post("/api/datasets", json={"name": "../evil", "content": "x\n"})
    assert bad_name.status_code == 400
    no_goals = client.post("/api/datasets",
                           json={"name": "nogoals",
                                 "content": "a,b\n1,2\n3,4\n" * 5})
    assert no_goals.status_code == 400
    assert not (tmp / "data" / "nogoals.csv").exists()
