"""Exact solvers for successive committee elections."""

from .model import (
    APPROVAL,
    APPROVAL_SCORE,
    CC,
    COVERAGE,
    CommitteeSeries,
    EGAL,
    EGAL_CC,
    Election,
    GuardExceeded,
    Instance,
    ORDINAL,
    ScoringSpec,
    SeriesViolation,
    SolveResult,
    THRESHOLD_CC,
    UTIL,
    WEAKLY_SEPARABLE,
    enumerate_committees,
    ids_of,
    mask_of,
    max_quality,
    phi_borda,
    phi_plurality,
    score_committee,
    series_quality,
    validate_series,
)
from .oracle import max_quality_exhaustive, solve_bruteforce
from .subset import egal_reduce, solve_polymult, solve_polymult_f1, solve_subset_dp
from .division import (
    Division,
    enumerate_divisions,
    solve_by_divisions,
    solve_division_dp,
    validate_division,
)
from .horizon import (
    Coloring,
    HashFamily,
    SetPackingInstance,
    best_single_committee,
    build_perfect_hash_family,
    color_solve,
    reduce_to_set_packing,
    solve_colorcoding_deterministic,
    solve_egal_horizon,
    solve_set_packing,
    solve_util_set_packing,
    solve_with_coloring,
    verify_perfect_hash_family,
)
from .fileio import ParseError, parse_election, parse_series, serialize_election, serialize_series
from .generators import approval_bernoulli, ordinal_impartial_culture

__all__ = [name for name in dir() if not name.startswith("_")]
