"""Label-frugal multi-objective optimization over tabular example spaces.

Find near-best rows of a table using a few dozen expensive goal labelings,
by Bayes-guided sequential acquisition, recursive bi-clustering, or random
sampling, with a Scott-Knott harness to rank the outcomes.
"""
from .config import Config
from .tabular import (
    MISSING,
    Dataset,
    NumSummary,
    Row,
    SymSummary,
    add_row,
    clone,
    d2h,
    dist_cell,
    dist_row,
    is_labeled,
    like_num,
    like_sym,
    load_csv,
    loglike_row,
    norm,
    parse_header,
)
from .oracle import (
    CachedOracle,
    InteractiveOracle,
    LabeledRow,
    Oracle,
    OracleError,
    SessionClosed,
    StaleRequest,
    UnknownRow,
    masked_view,
)
from .acquisition import (
    POLICIES,
    Candidate,
    LiteResult,
    Policy,
    acquire,
    get_policy,
    incumbent_trajectory,
    lite_run,
    rank_candidates,
    split_best_rest,
)
from .sway import SwayResult, faraway, half, near, sway_best, sway_run
from .baseline import baseline_d2h, hamlet_n, random_n
from .stats import (
    CLIFFS_SMALL,
    RankedTreatment,
    Treatment,
    cliffs_delta,
    is_different,
    percentiles,
    scott_knott,
)
from .estimators import LiteOptimizer, RandomSearch, SwayOptimizer
from .service import SCHEMA_VERSION, create_app, score_rows

__version__ = "0.1.0"

__all__ = [
    "Config",
    "MISSING",
    "Dataset",
    "NumSummary",
    "Row",
    "SymSummary",
    "add_row",
    "clone",
    "d2h",
    "dist_cell",
    "dist_row",
    "is_labeled",
    "like_num",
    "like_sym",
    "load_csv",
    "loglike_row",
    "norm",
    "parse_header",
    "CachedOracle",
    "InteractiveOracle",
    "LabeledRow",
    "Oracle",
    "OracleError",
    "SessionClosed",
    "StaleRequest",
    "UnknownRow",
    "masked_view",
    "POLICIES",
    "Candidate",
    "LiteResult",
    "Policy",
    "acquire",
    "get_policy",
    "incumbent_trajectory",
    "lite_run",
    "rank_candidates",
    "split_best_rest",
    "SwayResult",
    "faraway",
    "half",
    "near",
    "sway_best",
    "sway_run",
    "baseline_d2h",
    "hamlet_n",
    "random_n",
    "CLIFFS_SMALL",
    "RankedTreatment",
    "Treatment",
    "cliffs_delta",
    "is_different",
    "percentiles",
    "scott_knott",
    "LiteOptimizer",
    "RandomSearch",
    "SwayOptimizer",
    "SCHEMA_VERSION",
    "create_app",
    "score_rows",
    "__version__",
]
