"""Estimator-style adapters over the functional search routines.

Each optimizer follows the scikit-learn conventions: constructor arguments
are stored untouched, ``fit`` does the work and exposes its findings as
trailing-underscore attributes, and ``get_params``/``set_params``/``clone``
behave as usual.  ``fit`` takes a Dataset; when no oracle is supplied the
dataset is assumed fully labeled and is masked, so the optimizer only sees
goal values it explicitly paid for — ``labels_used_`` is then an honest
count of oracle queries.
"""
from __future__ import annotations

import random
from typing import Optional, Sequence, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .acquisition import lite_run
from .baseline import random_n
from .config import Config
from .oracle import Oracle, masked_view
from .sway import sway_best, sway_run
from .tabular import Dataset, Row, d2h, loglike_row
from .validation import check_row

RandomState = Union[None, int, random.Random]


def as_rng(random_state: RandomState) -> random.Random:
    """None -> fresh entropy; int -> seeded; Random instance -> as-is."""
    if isinstance(random_state, random.Random):
        return random_state
    return random.Random(random_state)


class _SearchMixin:
    """fit() plumbing shared by the optimizers."""

    def fit(self, data: Dataset, oracle: Optional[Oracle] = None):
        """Search ``data`` for its best row, paying for labels as it goes.

        With no oracle, ``data`` must be fully labeled: it is masked and a
        cached oracle answers from the hidden goals, in which case
        ``best_d2h_`` reports the winner's true distance to heaven in the
        full dataset's frame.  With a caller-supplied oracle the truth is
        unknown and ``best_d2h_`` is None.
        """
        rng = as_rng(self.random_state)
        if oracle is None:
            view, oracle = masked_view(data)
            truth: Optional[Dataset] = data
        else:
            view, truth = data, None
        self._search(view, oracle, rng)
        self.data_ = view
        self.oracle_ = oracle
        self.best_d2h_ = None if truth is None else d2h(truth, self.best_row_)
        return self

    def _search(self, view: Dataset, oracle: Oracle, rng: random.Random) -> None:
        raise NotImplementedError


class LiteOptimizer(_SearchMixin, BaseEstimator):
    """Sequential Bayes acquisition: label a few seeds, then buy one label
    per round where the best/rest model says it matters most.

    Parameters
    ----------
    budget : total labels allowed, seeds included
    policy : "certain" (exploit) or "uncertain" (explore)
    random_state : None, int seed, or a random.Random
    config : algorithm constants; defaults to Config()
    """

    def __init__(self, budget: int = 30, policy: str = "certain",
                 random_state: RandomState = None,
                 config: Optional[Config] = None):
        self.budget = budget
        self.policy = policy
        self.random_state = random_state
        self.config = config

    def _search(self, view: Dataset, oracle: Oracle, rng: random.Random) -> None:
        cfg = self.config or Config()
        result = lite_run(view, oracle, self.budget, self.policy, rng, cfg)
        self.result_ = result
        self.best_row_ = result.best_row.row
        self.labels_used_ = result.labels_used
        self.trajectory_ = result.trajectory
        self.model_ = result.model
        self.config_ = cfg

    def decision_function(self, X: Union[Dataset, Sequence[Row]]) -> np.ndarray:
        """Best-minus-rest log-likelihood margin for each row (higher is
        more best-like), under the model frozen at the end of fit."""
        check_is_fitted(self)
        if self.model_ is None:
            raise RuntimeError("run ended with too few labels to build a model")
        best, rest = self.model_
        rows = X.rows if isinstance(X, Dataset) else list(X)
        cfg = self.config_
        out = []
        for row in rows:
            check_row(self.data_, row)
            b = loglike_row(best, row, self.labels_used_, 2, m=cfg.m, k=cfg.k)
            r = loglike_row(rest, row, self.labels_used_, 2, m=cfg.m, k=cfg.k)
            out.append(b - r)
        return np.array(out)

    def predict(self, X: Union[Dataset, Sequence[Row]]) -> np.ndarray:
        """1 where the model finds a row more best-like than rest-like."""
        return (self.decision_function(X) > 0).astype(int)


class SwayOptimizer(_SearchMixin, BaseEstimator):
    """Recursive bi-clustering: halve the rows toward the better endpoint,
    paying two labels per level, until the cluster is root-N small."""

    def __init__(self, random_state: RandomState = None,
                 config: Optional[Config] = None):
        self.random_state = random_state
        self.config = config

    def _search(self, view: Dataset, oracle: Oracle, rng: random.Random) -> None:
        cfg = self.config or Config()
        result = sway_run(view, oracle, rng, cfg)
        best = sway_best(result, oracle, rng)
        self.result_ = result
        self.best_row_ = best.row
        self.best_leaf_ = result.best_leaf
        self.rest_ = result.rest
        self.labels_used_ = oracle.label_count
        self.config_ = cfg


class RandomSearch(_SearchMixin, BaseEstimator):
    """Label ``budget`` rows chosen uniformly; keep the best."""

    def __init__(self, budget: int = 50, random_state: RandomState = None):
        self.budget = budget
        self.random_state = random_state

    def _search(self, view: Dataset, oracle: Oracle, rng: random.Random) -> None:
        best = random_n(view, oracle, self.budget, rng)
        self.best_row_ = best.row
        self.labels_used_ = oracle.label_count
