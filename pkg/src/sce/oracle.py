"""Exhaustive reference solver: the ground truth for every other solver.

Enumerates all frequency-valid series depth-first, pruning a branch as soon
as a candidate would break contiguity or exceed the consecutive cap.  Slow by
design and guarded against instances too large to sweep.
"""
from __future__ import annotations

import math
from typing import Optional

from .model import (
    GuardExceeded,
    Instance,
    SolveResult,
    UTIL,
    checked_result,
    committee_scores,
    enumerate_committees,
)

ENUMERATION_GUARD = 10**8


def _check_guard(m: int, k: int, tau: int, force: bool) -> None:
    if not force and math.comb(m, k) ** tau > ENUMERATION_GUARD:
        raise GuardExceeded(
            f"C({m},{k})^{tau} exceeds the enumeration guard; pass force=True to override"
        )


def oracle_sweep(election, k: int, tau: int, f: int, combos, force: bool = False):
    """Best quality and witness for several (spec, alpha) pairs in one sweep.

    combos is a list of (ScoringSpec, alpha).  Returns a list of
    (best_quality, witness_committees) with (None, None) for combos no
    frequency-valid series can serve.  Witnesses are the first maximum found
    in canonical order (committees ascending by mask at every depth).
    """
    _check_guard(election.m, k, tau, force)
    all_committees = list(enumerate_committees(election.m, k))
    score_tables = [committee_scores(election, spec, k) for spec, _ in combos]
    ncombo = len(combos)
    best: list[Optional[int]] = [None] * ncombo
    best_series: list[Optional[tuple[int, ...]]] = [None] * ncombo
    alphas = [alpha for _, alpha in combos]

    prefix: list[int] = []
    sums = [0] * ncombo
    mins: list[Optional[int]] = [None] * ncombo

    def extend(depth: int, prev: int, blocked: int, runs: dict[int, int]):
        if depth == tau:
            for idx in range(ncombo):
                q = sums[idx] if alphas[idx] == UTIL else mins[idx]
                if best[idx] is None or q > best[idx]:
                    best[idx] = q
                    best_series[idx] = tuple(prefix)
            return
        for w in all_committees:
            if w & blocked:
                continue
            carried = w & prev
            new_runs = {}
            ok = True
            bits = carried
            while bits:
                b = bits & -bits
                r = runs[b] + 1
                if r > f:
                    ok = False
                    break
                new_runs[b] = r
                bits ^= b
            if not ok:
                continue
            bits = w & ~prev
            while bits:
                b = bits & -bits
                new_runs[b] = 1
                bits ^= b
            full = 0
            for b, r in new_runs.items():
                if r == f:
                    full |= b
            prefix.append(w)
            old = [(sums[i], mins[i]) for i in range(ncombo)]
            for i in range(ncombo):
                s = score_tables[i][w]
                sums[i] += s
                if mins[i] is None or s < mins[i]:
                    mins[i] = s
            extend(depth + 1, w, blocked | (prev & ~w) | full, new_runs)
            prefix.pop()
            for i in range(ncombo):
                sums[i], mins[i] = old[i]

    extend(0, 0, 0, {})
    return list(zip(best, best_series))


def max_quality_exhaustive(instance: Instance, force: bool = False) -> Optional[int]:
    """Maximum achievable series quality, or None if no valid series exists."""
    (best, _), = oracle_sweep(
        instance.election, instance.k, instance.tau, instance.f,
        [(instance.scoring, instance.alpha)], force=force,
    )
    return best


def solve_bruteforce(instance: Instance, force: bool = False) -> SolveResult:
    """Decide the instance by exhaustive search; witness is the best series."""
    (best, series), = oracle_sweep(
        instance.election, instance.k, instance.tau, instance.f,
        [(instance.scoring, instance.alpha)], force=force,
    )
    stats = {"max_quality": best}
    if best is None or best < instance.eta:
        return SolveResult(False, stats=stats)
    return checked_result(instance, series, stats)
