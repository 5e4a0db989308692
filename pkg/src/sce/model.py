"""Core data model: elections, committee scoring, series quality, frequency rules.

Candidates are numbered 1..m and committees are stored as m-bit masks with
candidate i on bit i-1.  All scores are exact machine integers; the threshold
rule compares coverage against gamma*n with exact rational arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

ORDINAL = "ordinal"
APPROVAL = "approval"

CC = "cc_ordinal"
EGAL_CC = "egal_cc_ordinal"
WEAKLY_SEPARABLE = "weakly_separable"
COVERAGE = "coverage"
THRESHOLD_CC = "threshold_cc"
APPROVAL_SCORE = "approval"

ORDINAL_BETAS = frozenset({CC, EGAL_CC, WEAKLY_SEPARABLE})
APPROVAL_BETAS = frozenset({COVERAGE, THRESHOLD_CC, APPROVAL_SCORE})
ALL_BETAS = ORDINAL_BETAS | APPROVAL_BETAS

UTIL = "util"
EGAL = "egal"


class GuardExceeded(Exception):
    """A solver refused an instance whose search space exceeds its size guard."""


def mask_of(ids) -> int:
    """Bit mask for a collection of 1-based candidate ids."""
    mask = 0
    for c in ids:
        mask |= 1 << (c - 1)
    return mask


def ids_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-based candidate ids present in a mask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def phi_borda(m: int) -> tuple[int, ...]:
    """Position weights m-x for x in 1..m."""
    return tuple(m - x for x in range(1, m + 1))


def phi_plurality(m: int) -> tuple[int, ...]:
    """Position weights max(0, 2-x) for x in 1..m."""
    return tuple(max(0, 2 - x) for x in range(1, m + 1))


@dataclass(frozen=True)
class Election:
    """An ordinal or approval election over candidates 1..m.

    rankings: one strict total order per voter, best first (ordinal only).
    approvals: one sorted id tuple per voter, possibly empty (approval only).
    """

    kind: str
    m: int
    n: int
    rankings: Optional[tuple[tuple[int, ...], ...]] = None
    approvals: Optional[tuple[tuple[int, ...], ...]] = None

    def __post_init__(self):
        if self.kind not in (ORDINAL, APPROVAL):
            raise ValueError(f"unknown election kind {self.kind!r}")
        if self.m < 1:
            raise ValueError("candidate count must be positive")
        if self.n < 1:
            raise ValueError("at least one voter is required")
        full = set(range(1, self.m + 1))
        if self.kind == ORDINAL:
            if self.approvals is not None:
                raise ValueError("ordinal election cannot carry approval sets")
            if self.rankings is None or len(self.rankings) != self.n:
                raise ValueError("ordinal election needs one ranking per voter")
            for i, r in enumerate(self.rankings):
                if set(r) != full or len(r) != self.m:
                    raise ValueError(f"voter {i + 1}: ranking is not a permutation of 1..{self.m}")
        else:
            if self.rankings is not None:
                raise ValueError("approval election cannot carry rankings")
            if self.approvals is None or len(self.approvals) != self.n:
                raise ValueError("approval election needs one approval set per voter")
            for i, a in enumerate(self.approvals):
                if len(set(a)) != len(a):
                    raise ValueError(f"voter {i + 1}: duplicate candidate in approval set")
                if not set(a) <= full:
                    raise ValueError(f"voter {i + 1}: candidate id out of range")


@lru_cache(maxsize=None)
def _position_rows(election: Election) -> tuple[tuple[int, ...], ...]:
    """pos_i(c) per voter: row[i][c-1] = 1-based rank position of candidate c."""
    rows = []
    for r in election.rankings:
        row = [0] * election.m
        for p, c in enumerate(r, start=1):
            row[c - 1] = p
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def _approval_masks(election: Election) -> tuple[int, ...]:
    return tuple(mask_of(a) for a in election.approvals)


@dataclass(frozen=True)
class ScoringSpec:
    """Which committee scoring function to apply, with its parameters.

    phi is required for WEAKLY_SEPARABLE: phi[x-1] is the weight of rank
    position x.  gamma is required for THRESHOLD_CC and must lie in (0, 1].
    """

    beta: str
    phi: Optional[tuple[int, ...]] = None
    gamma: Optional[Fraction] = None

    def __post_init__(self):
        if self.beta not in ALL_BETAS:
            raise ValueError(f"unknown scoring function {self.beta!r}")
        if self.beta == WEAKLY_SEPARABLE:
            if self.phi is None:
                raise ValueError("weakly separable scoring needs phi")
            if any(int(v) != v or v < 0 for v in self.phi):
                raise ValueError("phi values must be nonnegative integers")
        elif self.phi is not None:
            raise ValueError("phi is only meaningful for weakly separable scoring")
        if self.beta == THRESHOLD_CC:
            if self.gamma is None:
                raise ValueError("threshold scoring needs gamma")
            if not (0 < self.gamma <= 1):
                raise ValueError("gamma must lie in (0, 1]")
        elif self.gamma is not None:
            raise ValueError("gamma is only meaningful for threshold scoring")

    @property
    def kind(self) -> str:
        return ORDINAL if self.beta in ORDINAL_BETAS else APPROVAL


def _check_compatible(election: Election, spec: ScoringSpec) -> None:
    if spec.kind != election.kind:
        raise ValueError(f"{spec.beta} scoring needs a {spec.kind} election, got {election.kind}")
    if spec.beta == WEAKLY_SEPARABLE and len(spec.phi) != election.m:
        raise ValueError("phi must assign a weight to every rank position 1..m")


def _coverage(election: Election, w: int) -> int:
    return sum(1 for a in _approval_masks(election) if a & w)


def score_committee(election: Election, spec: ScoringSpec, w: int) -> int:
    """Score of committee mask w under the chosen scoring function."""
    _check_compatible(election, spec)
    if w == 0:
        raise ValueError("committee must be nonempty")
    if w >> election.m:
        raise ValueError("committee member id out of range")
    m = election.m
    beta = spec.beta
    if beta == CC or beta == EGAL_CC:
        per_voter = []
        for row in _position_rows(election):
            best = min(row[c - 1] for c in ids_of(w))
            per_voter.append(m - best)
        return sum(per_voter) if beta == CC else min(per_voter)
    if beta == WEAKLY_SEPARABLE:
        phi = spec.phi
        return sum(phi[row[c - 1] - 1] for row in _position_rows(election) for c in ids_of(w))
    if beta == COVERAGE:
        return _coverage(election, w)
    if beta == THRESHOLD_CC:
        cov = _coverage(election, w)
        # cov >= gamma * n, compared exactly
        return 1 if cov * spec.gamma.denominator >= spec.gamma.numerator * election.n else 0
    # approval score: sum over voters of |A(v) & W|
    return sum((a & w).bit_count() for a in _approval_masks(election))


@lru_cache(maxsize=None)
def committee_scores(election: Election, spec: ScoringSpec, k: int) -> dict[int, int]:
    """Scores of all size-k committees, keyed by mask.  Shared by the solvers."""
    return {w: score_committee(election, spec, w) for w in enumerate_committees(election.m, k)}


def series_quality(scores, alpha: str) -> int:
    """Aggregate per-committee scores: util sums them, egal takes the minimum."""
    scores = list(scores)
    if not scores:
        raise ValueError("cannot aggregate an empty score list")
    if alpha == UTIL:
        return sum(scores)
    if alpha == EGAL:
        return min(scores)
    raise ValueError(f"unknown aggregator {alpha!r}")


@dataclass(frozen=True)
class CommitteeSeries:
    """An ordered series of committee masks, with scores filled on demand."""

    committees: tuple[int, ...]
    per_committee_scores: tuple[int, ...] = field(default=(), compare=False)

    def scores(self, election: Election, spec: ScoringSpec) -> tuple[int, ...]:
        return tuple(score_committee(election, spec, w) for w in self.committees)

    def quality(self, election: Election, spec: ScoringSpec, alpha: str) -> int:
        return series_quality(self.scores(election, spec), alpha)

    def to_lines(self) -> list[str]:
        return [" ".join(str(c) for c in ids_of(w)) for w in self.committees]


@dataclass(frozen=True)
class SeriesViolation:
    """First rule broken by a committee series, as a value (never raised)."""

    reason: str
    index: int
    candidate: Optional[int] = None

    def __str__(self):
        where = f"committee {self.index + 1}"
        if self.candidate is not None:
            return f"candidate {self.candidate}, {where}: {self.reason}"
        return f"{where}: {self.reason}"


def validate_series(series, k: int, f: int) -> Optional[SeriesViolation]:
    """Check committee sizes and the consecutive frequency cap.

    Returns None when the series is valid, otherwise the first violation:
    wrong-size committees are reported first, then candidates (in id order)
    whose appearance indices are not one contiguous block of length <= f.
    """
    committees = list(series.committees if isinstance(series, CommitteeSeries) else series)
    for i, w in enumerate(committees):
        if w.bit_count() != k:
            return SeriesViolation(f"committee has size {w.bit_count()}, expected {k}", i)
    # streaming scan: track each candidate's open run and whether it closed
    run_start: dict[int, int] = {}
    closed: dict[int, int] = {}
    for i, w in enumerate(committees):
        prev = committees[i - 1] if i else 0
        for c in ids_of(w):
            if c in closed:
                return SeriesViolation("appears again after leaving the series", i, c)
            if not (prev >> (c - 1)) & 1:
                run_start[c] = i
            elif i - run_start[c] + 1 > f:
                return SeriesViolation(f"serves in more than {f} consecutive committees", i, c)
        for c in ids_of(prev & ~w):
            closed[c] = i
    return None


def max_quality(election: Election, spec: ScoringSpec, alpha: str, tau: int, k: int) -> int:
    """Cheap upper bound on the series quality, used to size DP tables."""
    _check_compatible(election, spec)
    n, m = election.n, election.m
    beta = spec.beta
    if beta == CC:
        bound = n * (m - 1)
    elif beta == EGAL_CC:
        bound = m - 1
    elif beta == WEAKLY_SEPARABLE:
        bound = n * k * max(spec.phi, default=0)
    elif beta == COVERAGE:
        bound = n
    elif beta == THRESHOLD_CC:
        bound = 1
    else:
        bound = n * k
    return tau * bound if alpha == UTIL else bound


def enumerate_committees(m: int, k: int, must_include: int = 0, allowed: int = -1) -> Iterator[int]:
    """Yield every size-k mask W with must_include <= W <= allowed.

    Masks come out in ascending numeric order, which is the deterministic
    order every solver relies on for tie-breaking.
    """
    full = (1 << m) - 1
    allowed = full if allowed == -1 else allowed & full
    if must_include & ~allowed:
        raise ValueError("must_include is not a subset of allowed")
    free = allowed & ~must_include
    need = k - must_include.bit_count()
    if need < 0 or free.bit_count() < need:
        return
    free_bits = [1 << (c - 1) for c in ids_of(free)]
    if need == 0:
        yield must_include
        return
    # combinations over bit positions in ascending order give ascending masks
    # when combined lowest-position-first (Gosper-equivalent ordering)
    for combo in _ascending_subsets(free_bits, need):
        yield must_include | combo


def _ascending_subsets(bits: list[int], k: int) -> Iterator[int]:
    """All k-subsets of the given single-bit values, in ascending mask order."""
    t = len(bits)
    # Gosper's hack over a compressed universe of t bits; expanding compressed
    # bit j to bits[j] preserves numeric order because bits[] is ascending.
    x = (1 << k) - 1
    top = 1 << t
    while x < top:
        mask = 0
        y = x
        j = 0
        while y:
            if y & 1:
                mask |= bits[j]
            y >>= 1
            j += 1
        yield mask
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


@dataclass(frozen=True)
class Instance:
    """One decision problem: election, scoring, and (tau, k, f, eta, alpha)."""

    election: Election
    scoring: ScoringSpec
    tau: int
    k: int
    f: int
    eta: int
    alpha: str

    def __post_init__(self):
        _check_compatible(self.election, self.scoring)
        if not 1 <= self.k <= self.election.m:
            raise ValueError("committee size must satisfy 1 <= k <= m")
        if self.tau < 1:
            raise ValueError("series length must be at least 1")
        if self.f < 1:
            raise ValueError("frequency cap must be at least 1")
        if self.eta < 0:
            raise ValueError("required quality must be nonnegative")
        if self.alpha not in (UTIL, EGAL):
            raise ValueError(f"unknown aggregator {self.alpha!r}")

    def quality_bound(self) -> int:
        return max_quality(self.election, self.scoring, self.alpha, self.tau, self.k)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one solver run; a feasible answer always carries a witness."""

    feasible: bool
    witness: Optional[CommitteeSeries] = None
    quality: Optional[int] = None
    stats: dict = field(default_factory=dict, compare=False)


def checked_result(instance: Instance, committees: tuple[int, ...], stats: Optional[dict] = None) -> SolveResult:
    """Wrap a witness, re-validating frequency and quality before reporting."""
    series = CommitteeSeries(committees)
    violation = validate_series(series, instance.k, instance.f)
    if violation is not None:
        raise AssertionError(f"solver produced an invalid witness: {violation}")
    q = series.quality(instance.election, instance.scoring, instance.alpha)
    if q < instance.eta:
        raise AssertionError(f"solver witness has quality {q} < required {instance.eta}")
    return SolveResult(True, series, q, stats or {})
