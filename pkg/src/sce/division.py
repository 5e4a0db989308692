"""Guess-and-sweep solver: enumerate candidate-order divisions, then run a
grid DP over each guessed division.

A division fixes an order of the candidates, a chain of size-k interval
committees (primitives), and optional interim candidate sets that may form
intermediate committees between two overlapping primitives.  Its space is
every series obtained by repeating primitive i some q_i >= 1 times followed
by u_i >= 0 copies of the intermediate committee, subject to the consecutive
frequency cap.  The DP walks the (primitive row, candidate column) grid from
the last primitive's tail to the first primitive's head, carrying how often
the current row's blocks repeat and how many consecutive committees the
current column's candidate has served in.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .model import (
    EGAL,
    GuardExceeded,
    Instance,
    SolveResult,
    UTIL,
    CommitteeSeries,
    checked_result,
    committee_scores,
    ids_of,
    series_quality,
    validate_series,
)


@dataclass(frozen=True)
class Division:
    """Order rho, interval primitives, and interim sets (masks, one per primitive)."""

    rho: tuple[int, ...]
    primitives: tuple[int, ...]
    interims: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.primitives)

    def spans(self) -> list[tuple[int, int]]:
        """(beg, end) position of each primitive interval under rho."""
        pos = {c: i + 1 for i, c in enumerate(self.rho)}
        out = []
        for s in self.primitives:
            ps = [pos[c] for c in ids_of(s)]
            out.append((min(ps), max(ps)))
        return out

    def intermediate(self, i: int) -> Optional[int]:
        """Committee placed between primitives i and i+1 (1-based), if any."""
        if self.interims[i - 1] == 0:
            return None
        return (self.primitives[i - 1] & self.primitives[i]) | self.interims[i - 1]


@dataclass(frozen=True)
class DivisionViolation:
    letter: str
    message: str

    def __str__(self):
        return f"{self.letter}) {self.message}"


def validate_division(div: Division, k: int) -> Optional[DivisionViolation]:
    """Check the seven structural conditions; report the first broken one."""
    pos = {c: i + 1 for i, c in enumerate(div.rho)}
    d = div.d
    begs = []
    for idx, s in enumerate(div.primitives, start=1):
        ps = sorted(pos[c] for c in ids_of(s))
        if len(ps) != k or ps != list(range(ps[0], ps[0] + k)):
            return DivisionViolation("a", f"primitive {idx} is not a size-{k} interval under rho")
        begs.append(ps[0])
    for i in range(d - 1):
        if not begs[i] < begs[i + 1]:
            return DivisionViolation("b", f"primitives {i + 1} and {i + 2} are not ordered by interval start")
    if div.interims[d - 1] != 0:
        return DivisionViolation("c", "the last interim set must be empty")
    for i, j in itertools.combinations(range(d), 2):
        if div.interims[i] & div.interims[j]:
            return DivisionViolation("d", f"interim sets {i + 1} and {j + 1} overlap")
    for i in range(d - 1):
        fi = div.interims[i]
        if fi == 0:
            continue
        overlap = div.primitives[i] & div.primitives[i + 1]
        if fi.bit_count() != k - overlap.bit_count():
            return DivisionViolation("e", f"interim set {i + 1} has size {fi.bit_count()}, expected {k - overlap.bit_count()}")
    for i in range(d - 1):
        if div.primitives[i] & div.primitives[i + 1] == 0 and div.interims[i] != 0:
            return DivisionViolation("f", f"interim set {i + 1} must be empty: primitives {i + 1} and {i + 2} are disjoint")
    all_f = 0
    for fi in div.interims:
        all_f |= fi
    all_s = 0
    for s in div.primitives:
        all_s |= s
    if all_f & all_s:
        return DivisionViolation("g", "interim candidates must not belong to any primitive")
    return None


def _endpoint_vectors(m: int, k: int) -> Iterator[tuple[int, ...]]:
    """Right endpoints of the primitive intervals: s1 = k, step 1..k+1."""
    stack = [(k,)]
    while stack:
        vec = stack.pop()
        yield vec
        last = vec[-1]
        for step in range(k + 1, 0, -1):
            if last + step <= m:
                stack.append(vec + (last + step,))


def enumerate_divisions(m: int, k: int, orders=None) -> Iterator[Division]:
    """Every division the guess loop considers, lazily, for every order rho.

    Interim sets are either empty or the next unused candidates in rho order,
    which keeps the guess count bounded while still covering the whole
    solution space across permutations.
    """
    if k > m:
        return
    if orders is None:
        orders = itertools.permutations(range(1, m + 1))
    vectors = list(_endpoint_vectors(m, k))
    for rho in orders:
        for vec in vectors:
            d = len(vec)
            spans = [(s - k + 1, s) for s in vec]
            used = set()
            for beg, end in spans:
                used.update(range(beg, end + 1))
            unused = [p for p in range(1, m + 1) if p not in used]
            overlap_need = []
            for i in range(d - 1):
                ov = spans[i][1] - spans[i + 1][0] + 1
                overlap_need.append(k - ov if ov > 0 else None)
            choice_sets = [(False, True) if need is not None else (False,) for need in overlap_need]
            primitives = tuple(
                _mask_from_positions(rho, range(beg, end + 1)) for beg, end in spans
            )
            for picks in itertools.product(*choice_sets):
                cursor = 0
                interims = []
                ok = True
                for i in range(d - 1):
                    if picks[i]:
                        need = overlap_need[i]
                        if cursor + need > len(unused):
                            ok = False
                            break
                        interims.append(_mask_from_positions(rho, unused[cursor:cursor + need]))
                        cursor += need
                    else:
                        interims.append(0)
                if not ok:
                    continue
                interims.append(0)
                yield Division(tuple(rho), primitives, tuple(interims))


def _mask_from_positions(rho, positions) -> int:
    mask = 0
    for p in positions:
        mask |= 1 << (rho[p - 1] - 1)
    return mask


@lru_cache(maxsize=None)
def unique_divisions(m: int, k: int) -> tuple[Division, ...]:
    """Deduplicated divisions over all orders; (primitives, interims) pins
    the DP-relevant structure, so one representative per pair suffices."""
    seen = set()
    out = []
    for div in enumerate_divisions(m, k):
        key = (div.primitives, div.interims)
        if key not in seen:
            seen.add(key)
            out.append(div)
    return tuple(out)


class _DivisionDP:
    """Boolean grid DP T(t, i, q, u, j, r, p) over one division.

    t committees placed so far, i the current primitive row, q and u the
    repeat counts of primitive i and its intermediate committee, j the
    current candidate column, r the consecutive committees column j's
    candidate serves in within the prefix, p the residual quality demand.
    """

    def __init__(self, div: Division, instance: Instance, scores: dict[int, int]):
        self.div = div
        self.f = instance.f
        self.tau = instance.tau
        self.alpha = instance.alpha
        self.spans = div.spans()
        self.d = div.d
        self.beta_s = [scores[s] for s in div.primitives]
        self.beta_m = []
        for i in range(1, self.d + 1):
            inter = div.intermediate(i) if i < self.d else None
            self.beta_m.append(scores[inter] if inter is not None else None)
        # bounds[state] = [max demand proven satisfiable, min demand proven not]
        self.bounds: dict[tuple, list] = {}

    def _reqqual(self, i: int, p: int, q: int, u: int) -> Optional[int]:
        """Residual demand before row i's blocks; None if the blocks disqualify."""
        if self.alpha == UTIL:
            got = q * self.beta_s[i - 1] + u * (self.beta_m[i - 1] or 0)
            return max(0, p - got)
        if self.beta_s[i - 1] < p or (u > 0 and self.beta_m[i - 1] < p):
            return None
        return p

    def top(self, eta: int) -> bool:
        tail_d = self.spans[self.d - 1][1]
        for q in range(1, self.f + 1):
            for r in range(1, self.f + 1):
                if self.query(self.tau, self.d, q, 0, tail_d, r, eta):
                    return True
        return False

    def query(self, t, i, q, u, j, r, p) -> bool:
        p = max(0, p)
        f = self.f
        if not (1 <= q <= f and 0 <= u <= f and 1 <= r <= f):
            return False
        if q + u > f or q + u > t or t > self.tau:
            return False
        if u > 0 and self.beta_m[i - 1] is None:
            return False
        beg, end = self.spans[i - 1]
        if not beg <= j <= end:
            return False
        key = (t, i, q, u, j, r)
        bound = self.bounds.get(key)
        if bound is None:
            bound = [-1, None]
            self.bounds[key] = bound
        if p <= bound[0]:
            return True
        if bound[1] is not None and p >= bound[1]:
            return False
        result = self._compute(t, i, q, u, j, r, p)
        if result:
            bound[0] = max(bound[0], p)
        else:
            bound[1] = p if bound[1] is None else min(bound[1], p)
        return result

    def _compute(self, t, i, q, u, j, r, p) -> bool:
        f = self.f
        beg, end = self.spans[i - 1]
        if i == 1:
            in_overlap = self.d > 1 and self.spans[1][0] <= j <= end
            if t != q + u or r != q + (u if in_overlap else 0):
                return False
            rq = self._reqqual(1, p, q, u)
            return rq == 0 if self.alpha == UTIL else rq is not None
        prev_beg, prev_end = self.spans[i - 2]
        if j == beg:
            rq = self._reqqual(i, p, q, u)
            if rq is None:
                return False
            if prev_end < beg:  # no overlap with the previous primitive
                if q != r:
                    return False
                for q2 in range(1, f + 1):
                    for r2 in range(1, f + 1):
                        if self.query(t - q - u, i - 1, q2, 0, prev_end, r2, rq):
                            return True
                return False
            if r <= q:
                return False
            for q2 in range(1, f + 1):
                for u2 in range(0, f + 1):
                    if self.query(t - q - u, i - 1, q2, u2, j, r - q, rq):
                        return True
            return False
        in_next = i < self.d and self.spans[i][0] <= j
        in_prev = j <= prev_end
        if not in_next:
            for r2 in range(r, f + 1):
                if self.query(t, i, q, u, j - 1, r2, p):
                    return True
            return False
        if not in_prev:
            if r != q + u:
                return False
            for r2 in range(q, f + 1):
                if self.query(t, i, q, u, j - 1, r2, p):
                    return True
            return False
        if r <= q + u:
            return False
        left = False
        for r2 in range(q, f + 1):
            if self.query(t, i, q, u, j - 1, r2, p):
                left = True
                break
        if not left:
            return False
        rq = self._reqqual(i, p, q, u)
        if rq is None:
            return False
        for q2 in range(1, f + 1):
            for u2 in range(0, f + 1):
                if self.query(t - q - u, i - 1, q2, u2, j, r - q - u, rq):
                    return True
        return False

    def multiplicities(self, eta: int) -> Optional[tuple[list[int], list[int]]]:
        """Repeat counts (q_i, u_i) per row along the first accepting path."""
        tail_d = self.spans[self.d - 1][1]
        state = None
        for q in range(1, self.f + 1):
            for r in range(1, self.f + 1):
                if self.query(self.tau, self.d, q, 0, tail_d, r, eta):
                    state = (self.tau, self.d, q, 0, tail_d, r, eta)
                    break
            if state:
                break
        if state is None:
            return None
        qs: list[int] = [0] * self.d
        us: list[int] = [0] * self.d
        t, i, q, u, j, r, p = state
        while True:
            qs[i - 1], us[i - 1] = q, u
            beg, end = self.spans[i - 1]
            # sweep left inside the row, then drop to the previous row
            while j > beg:
                in_next = i < self.d and self.spans[i][0] <= j
                in_prev = j <= self.spans[i - 2][1] if i > 1 else False
                lo = q if in_next else r
                nxt = None
                for r2 in range(lo, self.f + 1):
                    if self.query(t, i, q, u, j - 1, r2, p):
                        nxt = r2
                        break
                if nxt is None:
                    raise AssertionError("witness re-descent lost the accepting path")
                j, r = j - 1, nxt
            if i == 1:
                return qs, us
            rq = self._reqqual(i, p, q, u)
            prev_end = self.spans[i - 2][1]
            overlap = prev_end >= beg
            found = None
            for q2 in range(1, self.f + 1):
                if found:
                    break
                if overlap:
                    for u2 in range(0, self.f + 1):
                        if self.query(t - q - u, i - 1, q2, u2, j, r - q, rq):
                            found = (q2, u2, j, r - q)
                            break
                else:
                    for r2 in range(1, self.f + 1):
                        if self.query(t - q - u, i - 1, q2, 0, prev_end, r2, rq):
                            found = (q2, 0, prev_end, r2)
                            break
            if found is None:
                raise AssertionError("witness re-descent lost the accepting path")
            t, i, p = t - q - u, i - 1, rq
            q, u, j, r = found


def expand_multiplicities(div: Division, qs, us) -> tuple[int, ...]:
    """q_i copies of each primitive, then u_i copies of its intermediate."""
    series: list[int] = []
    for i in range(1, div.d + 1):
        series.extend([div.primitives[i - 1]] * qs[i - 1])
        if us[i - 1]:
            series.extend([div.intermediate(i)] * us[i - 1])
    return tuple(series)


def division_space_witness(div: Division, instance: Instance) -> Optional[tuple[int, ...]]:
    """First feasible series in the division's space, by direct enumeration.

    Independent of the grid DP: tries every repeat-count combination in
    canonical order and checks it with the series validator.
    """
    scores = committee_scores(instance.election, instance.scoring, instance.k)
    d = div.d
    f, tau = instance.f, instance.tau

    def rec(i: int, total: int, qs: list[int], us: list[int]):
        if i > d:
            if total != tau:
                return None
            series = expand_multiplicities(div, qs, us)
            if validate_series(series, instance.k, instance.f) is not None:
                return None
            quality = series_quality([scores[w] for w in series], instance.alpha)
            return series if quality >= instance.eta else None
        has_inter = div.intermediate(i) is not None and i < d
        for q in range(1, f + 1):
            for u in range(0, (f if has_inter else 0) + 1):
                if total + q + u > tau:
                    break
                found = rec(i + 1, total + q + u, qs + [q], us + [u])
                if found is not None:
                    return found
        return None

    return rec(1, 0, [], [])


def solve_division_dp(div: Division, instance: Instance) -> SolveResult:
    """Decide whether one division's space contains a good-enough series."""
    scores = committee_scores(instance.election, instance.scoring, instance.k)
    dp = _DivisionDP(div, instance, scores)
    stats = {"dp_states": 0, "space_fallback": 0}
    if not dp.top(instance.eta):
        stats["dp_states"] = len(dp.bounds)
        return SolveResult(False, stats=stats)
    stats["dp_states"] = len(dp.bounds)
    qs_us = dp.multiplicities(instance.eta)
    if qs_us is not None:
        series = expand_multiplicities(div, *qs_us)
        if validate_series(series, instance.k, instance.f) is None:
            quality = series_quality([scores[w] for w in series], instance.alpha)
            if quality >= instance.eta:
                return checked_result(instance, series, stats)
    # the recorded path did not expand to a valid series: search the space
    stats["space_fallback"] = 1
    series = division_space_witness(div, instance)
    if series is None:
        return SolveResult(False, stats=stats)
    return checked_result(instance, series, stats)


def _division_capacity(div: Division, f: int) -> int:
    """Most committees any multiplicity assignment of this division yields."""
    cap = 0
    for i in range(1, div.d + 1):
        cap += f
        if i < div.d and div.intermediate(i) is not None:
            cap += f
    return cap


def solve_by_divisions(instance: Instance) -> SolveResult:
    """OR of the division DP over every guessed division."""
    m = instance.election.m
    if m > 8:
        raise GuardExceeded("division enumeration supports at most 8 candidates")
    scores = committee_scores(instance.election, instance.scoring, instance.k)
    decided: dict[tuple, bool] = {}
    stats = {"divisions": 0, "dp_runs": 0}
    for div in unique_divisions(m, instance.k):
        if div.d > instance.tau or _division_capacity(div, instance.f) < instance.tau:
            continue
        stats["divisions"] += 1
        sig = _dp_signature(div, scores)
        known = decided.get(sig)
        if known is False:
            continue
        stats["dp_runs"] += 1
        result = solve_division_dp(div, instance)
        decided[sig] = result.feasible
        if result.feasible:
            result.stats.update(stats)
            return result
    return SolveResult(False, stats=stats)


def _dp_signature(div: Division, scores: dict[int, int]) -> tuple:
    """Canonical key: divisions with the same block incidence pattern and the
    same block scores have identical DP outcomes."""
    relabel: dict[int, int] = {}

    def canon(mask: int) -> tuple[int, ...]:
        out = []
        for c in ids_of(mask):
            if c not in relabel:
                relabel[c] = len(relabel)
            out.append(relabel[c])
        return tuple(out)

    parts = []
    for i in range(1, div.d + 1):
        s = div.primitives[i - 1]
        inter = div.intermediate(i) if i < div.d else None
        parts.append((canon(s), scores[s], canon(inter) if inter else None,
                      scores[inter] if inter else None))
    return tuple(parts)
