"""Estimator adapters: params round-trip, fitted attributes, scoring."""
from __future__ import annotations

import random

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from frugalopt.config import Config
from frugalopt.estimators import LiteOptimizer, RandomSearch, SwayOptimizer, as_rng
from frugalopt.oracle import masked_view
from frugalopt.tabular import d2h, loglike_row
from conftest import make_dataset


# ----------------------------------------------------------- param plumbing

def test_get_params_round_trip():
    est = LiteOptimizer(budget=25, policy="uncertain", random_state=7)
    params = est.get_params()
    assert params["budget"] == 25
    assert params["policy"] == "uncertain"
    assert params["random_state"] == 7
    assert params["config"] is None


def test_sklearn_clone_preserves_params():
    cfg = Config(start=6)
    est = LiteOptimizer(budget=40, policy="certain", random_state=3, config=cfg)
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "best_row_")


def test_set_params_chains():
    est = RandomSearch().set_params(budget=12, random_state=5)
    assert est.budget == 12
    assert est.random_state == 5


def test_as_rng_accepts_all_three_forms():
    assert as_rng(3).random() == random.Random(3).random()
    shared = random.Random(9)
    assert as_rng(shared) is shared
    assert isinstance(as_rng(None), random.Random)


# ----------------------------------------------------------- unfitted state

@pytest.mark.parametrize("method", ["decision_function", "predict"])
def test_lite_unfitted_raises(method):
    data = make_dataset(seed=1, n=30)
    with pytest.raises(NotFittedError):
        getattr(LiteOptimizer(), method)(data)


# ------------------------------------------------------------ LiteOptimizer

def test_lite_fit_exposes_run_attributes():
    data = make_dataset(seed=11, n=60)
    est = LiteOptimizer(budget=20, random_state=2).fit(data)
    assert est.labels_used_ == 20
    assert est.best_row_.ident in {r.ident for r in data.rows}
    assert 0.0 <= est.best_d2h_ <= 1.0
    assert len(est.trajectory_) == 20
    lows = [v for _, v in est.trajectory_]
    assert lows == sorted(lows, reverse=True)


def test_lite_fit_is_deterministic_per_seed():
    data = make_dataset(seed=13, n=60)
    a = LiteOptimizer(budget=15, random_state=4).fit(data)
    b = LiteOptimizer(budget=15, random_state=4).fit(data)
    assert a.best_row_.ident == b.best_row_.ident
    assert a.trajectory_ == b.trajectory_


def test_lite_fit_beats_the_field_median():
    data = make_dataset(seed=17, n=80)
    est = LiteOptimizer(budget=30, random_state=6).fit(data)
    from statistics import median
    field = median(d2h(data, row) for row in data.rows)
    assert est.best_d2h_ < field


def test_lite_decision_function_matches_manual_loglike():
    data = make_dataset(seed=19, n=50)
    est = LiteOptimizer(budget=12, random_state=8).fit(data)
    rows = data.rows[:5]
    got = est.decision_function(rows)
    best, rest = est.model_
    want = [loglike_row(best, r, est.labels_used_, 2) -
            loglike_row(rest, r, est.labels_used_, 2) for r in rows]
    assert np.allclose(got, want)
    assert got.shape == (5,)


def test_lite_predict_thresholds_decision_at_zero():
    data = make_dataset(seed=23, n=50)
    est = LiteOptimizer(budget=12, random_state=10).fit(data)
    scores = est.decision_function(data)
    pred = est.predict(data)
    assert set(pred) <= {0, 1}
    assert np.array_equal(pred, (scores > 0).astype(int))


def test_lite_fit_with_custom_oracle_reports_no_truth():
    data = make_dataset(seed=29, n=40)
    view, oracle = masked_view(data)
    est = LiteOptimizer(budget=10, random_state=12).fit(view, oracle)
    assert est.best_d2h_ is None
    assert oracle.label_count == 10


def test_lite_refit_resets_state():
    data = make_dataset(seed=31, n=40)
    est = LiteOptimizer(budget=10, random_state=14)
    first = est.fit(data).best_row_.ident
    second = est.fit(data).best_row_.ident
    assert first == second
    assert est.labels_used_ == 10


def test_lite_rejects_budget_below_seed_phase():
    data = make_dataset(seed=37, n=40)
    with pytest.raises(ValueError):
        LiteOptimizer(budget=4, random_state=1).fit(data)


# ------------------------------------------------------------ SwayOptimizer

def test_sway_fit_partitions_and_counts_labels():
    data = make_dataset(seed=41, n=256)
    est = SwayOptimizer(random_state=16).fit(data)
    assert len(est.best_leaf_) + len(est.rest_) == 256
    assert 2 <= est.labels_used_ <= 8
    assert est.best_row_.ident in {r.ident for r in est.best_leaf_}
    assert 0.0 <= est.best_d2h_ <= 1.0


def test_sway_fit_deterministic():
    data = make_dataset(seed=43, n=150)
    a = SwayOptimizer(random_state=18).fit(data)
    b = SwayOptimizer(random_state=18).fit(data)
    assert a.best_row_.ident == b.best_row_.ident
    assert a.labels_used_ == b.labels_used_


# ------------------------------------------------------------- RandomSearch

def test_random_search_exhaustive_finds_truth():
    data = make_dataset(seed=47, n=30)
    est = RandomSearch(budget=30, random_state=20).fit(data)
    assert est.best_d2h_ == pytest.approx(min(d2h(data, r) for r in data.rows))
    assert est.labels_used_ == 30


def test_random_search_respects_budget():
    data = make_dataset(seed=53, n=60)
    est = RandomSearch(budget=7, random_state=22).fit(data)
    assert est.labels_used_ == 7


def test_random_search_rejects_bad_budget():
    data = make_dataset(seed=59, n=10)
    with pytest.raises(ValueError):
        RandomSearch(budget=0, random_state=1).fit(data)
