"""Short-horizon solvers: set packing for f=1 and color coding for general f.

The color-coding route colors candidates with k*tau colors, discards
committees whose members share a color, and runs a sliding-window DP whose
state is the set of colors retired so far plus the identities of the last f
committees.  Random colorings give a one-sided Monte Carlo solver; replacing
them with a perfect hash family makes the decision exact.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .model import (
    EGAL,
    GuardExceeded,
    Instance,
    SolveResult,
    UTIL,
    checked_result,
    committee_scores,
    enumerate_committees,
    ids_of,
)
from .subset import egal_reduce, expand_f1_witness

STATE_CAP = 2_000_000
RANDOM_KT_CAP = 8  # ceil(e^(k*tau)) repetitions stay in the low thousands


@dataclass(frozen=True)
class SetPackingInstance:
    """Pick packs_needed pairwise disjoint family sets of total weight >= weight_needed."""

    universe_size: int
    family: tuple[tuple[int, int], ...]  # (mask, weight), uniform set size
    packs_needed: int
    weight_needed: int

    def set_size(self) -> int:
        sizes = {mask.bit_count() for mask, _ in self.family}
        if len(sizes) > 1:
            raise ValueError("set packing family must have uniform set size")
        return sizes.pop() if sizes else 0


@dataclass(frozen=True)
class Coloring:
    """A total candidate coloring with colors 0..ncolors-1."""

    chi: tuple[int, ...]
    ncolors: int

    def __post_init__(self):
        if any(not 0 <= c < self.ncolors for c in self.chi):
            raise ValueError("coloring uses a color outside its palette")

    def color_mask(self, cand_mask: int) -> int:
        mask = 0
        for c in ids_of(cand_mask):
            mask |= 1 << self.chi[c - 1]
        return mask


class ColorDPKey(NamedTuple):
    """Sliding-window DP state: committees placed, colors already retired,
    and the identities of the last f committees (-1 pads an unfilled slot)."""

    placed: int
    retired_colors: int
    window: tuple[int, ...]


@dataclass(frozen=True)
class HashFamily:
    """Functions [p] -> [q] such that every q-subset is injectively colored
    by at least one member."""

    functions: tuple[tuple[int, ...], ...]
    p: int
    q: int


def _windowed_search(entries, f: int, tau: int, eta: int, coloring: Coloring):
    """Best-total DP over series of the given rainbow committees.

    entries: list of (candidate_mask, color_mask, score) in a deterministic
    order.  Returns (witness_masks, value) for the first final state whose
    total reaches eta, else None.  Every reachable state decodes to a
    frequency-valid series: a committee may only continue runs of candidates
    it shares with its immediate predecessor, and newly joining members must
    bring colors never used before.
    """
    n_entries = len(entries)
    if n_entries == 0 or tau == 0:
        return None
    # entrant color table: colors brought in when committee b follows a
    entrants = [[0] * n_entries for _ in range(n_entries + 1)]
    for bi, (bc, bcol, _) in enumerate(entries):
        entrants[n_entries][bi] = bcol  # no predecessor: every member enters
        for ai, (ac, _, _) in enumerate(entries):
            entrants[ai][bi] = coloring.color_mask(bc & ~ac)
    start = ColorDPKey(0, 0, (-1,) * f)
    history: list[dict[ColorDPKey, list]] = [{start: [0, None, None]}]
    for step in range(tau):
        new_states: dict[ColorDPKey, list] = {}
        for key, (value, _, _) in history[step].items():
            retired, window = key.retired_colors, key.window
            blocked = retired
            full_run = -1  # candidates serving in every window slot
            for idx in window:
                if idx == -1:
                    full_run = 0
                else:
                    full_run &= entries[idx][0]
                    blocked |= entries[idx][1]
            last = window[-1]
            trans_row = entrants[last if last >= 0 else n_entries]
            leaving = window[0]
            retired_next = retired | (entries[leaving][1] if leaving >= 0 else 0)
            tail = window[1:]
            for ci in range(n_entries):
                if trans_row[ci] & blocked:
                    continue
                if entries[ci][0] & full_run:
                    continue
                nxt = ColorDPKey(step + 1, retired_next, tail + (ci,))
                cand = value + entries[ci][2]
                cur = new_states.get(nxt)
                if cur is None or cand > cur[0]:
                    new_states[nxt] = [cand, key, ci]
        if len(new_states) > STATE_CAP:
            raise GuardExceeded("color-coding DP exceeded its state cap")
        history.append(new_states)
    for key, (value, _, _) in history[tau].items():
        if value >= eta:
            chain = []
            cursor, level = key, tau
            while level > 0:
                _, parent, ci = history[level][cursor]
                chain.append(entries[ci][0])
                cursor, level = parent, level - 1
            return tuple(reversed(chain)), value
    return None


def _rainbow_entries(masks_scores, coloring: Coloring, k: int):
    entries = []
    for mask, score in masks_scores:
        colm = coloring.color_mask(mask)
        if colm.bit_count() == k:
            entries.append((mask, colm, score))
    return entries


def best_single_committee(election, spec, k: int) -> tuple[int, int]:
    """Highest-scoring size-k committee; ties go to the lowest mask."""
    scores = committee_scores(election, spec, k)
    best_mask, best_score = None, None
    for w in enumerate_committees(election.m, k):
        s = scores[w]
        if best_score is None or s > best_score:
            best_mask, best_score = w, s
    return best_mask, best_score


def _short_series_shortcut(instance: Instance) -> SolveResult:
    """tau <= f: repeating the best committee tau times is optimal for util."""
    mask, score = best_single_committee(instance.election, instance.scoring, instance.k)
    if score * instance.tau >= instance.eta:
        return checked_result(instance, (mask,) * instance.tau, {"shortcut": "repeat-best"})
    return SolveResult(False, stats={"shortcut": "repeat-best", "max_quality": score * instance.tau})


def reduce_to_set_packing(instance: Instance) -> SetPackingInstance:
    """f=1 utilitarian instances are weighted set packing over all committees."""
    if instance.f != 1:
        raise ValueError("the set-packing reduction requires f = 1")
    if instance.alpha != UTIL:
        raise ValueError("the set-packing reduction covers the utilitarian aggregate")
    scores = committee_scores(instance.election, instance.scoring, instance.k)
    family = tuple(sorted(scores.items()))
    return SetPackingInstance(instance.election.m, family, instance.tau, instance.eta)


def _packing_exact_small(spi: SetPackingInstance):
    if spi.universe_size > 22:
        raise GuardExceeded("exact set-packing DP supports at most 22 universe elements")
    levels = [{0: (0, None, None)}]
    for j in range(1, spi.packs_needed + 1):
        cur: dict[int, tuple] = {}
        for union in sorted(levels[j - 1]):
            value = levels[j - 1][union][0]
            for idx, (mask, w) in enumerate(spi.family):
                if mask & union:
                    continue
                nu = union | mask
                cand = value + w
                if nu not in cur or cand > cur[nu][0]:
                    cur[nu] = (cand, union, idx)
        levels.append(cur)
    final = levels[spi.packs_needed]
    best_union = None
    for union in sorted(final):
        if final[union][0] >= spi.weight_needed:
            if best_union is None or final[union][0] > final[best_union][0]:
                best_union = union
    stats = {"unions": sum(len(level) for level in levels)}
    if best_union is None:
        return False, None, stats
    chosen = []
    union, j = best_union, spi.packs_needed
    while j > 0:
        _, prev, idx = levels[j][union]
        chosen.append(spi.family[idx][0])
        union, j = prev, j - 1
    return True, tuple(sorted(chosen)), stats


def _packing_with_coloring(spi: SetPackingInstance, coloring: Coloring):
    k = spi.set_size()
    entries = _rainbow_entries(spi.family, coloring, k)
    hit = _windowed_search(entries, 1, spi.packs_needed, spi.weight_needed, coloring)
    if hit is None:
        return False, None
    return True, tuple(sorted(hit[0]))


def solve_set_packing(spi: SetPackingInstance, mode: str = "exact-small", seed: int = 0):
    """Decide a set-packing instance.  Returns (feasible, sets, stats).

    exact-small and derandomized modes are exact; color-coding(seed) is
    one-sided (a yes always carries disjoint sets, a no proves nothing).
    """
    if spi.packs_needed < 1:
        raise ValueError("at least one set must be packed")
    k = spi.set_size()
    if k == 0:
        return False, None, {"family": 0}
    if mode == "exact-small":
        return _packing_exact_small(spi)
    ncolors = k * spi.packs_needed
    if mode == "color-coding":
        if ncolors > RANDOM_KT_CAP:
            raise GuardExceeded("color-coding repetitions exceed the size guard")
        reps = math.ceil(math.exp(ncolors))
        for rep in range(reps):
            rng = random.Random(seed * (2 ** 32) + rep)
            coloring = Coloring(tuple(rng.randrange(ncolors) for _ in range(spi.universe_size)), ncolors)
            ok, sets = _packing_with_coloring(spi, coloring)
            if ok:
                return True, sets, {"reps_used": rep + 1, "reps": reps}
        return False, None, {"reps_used": reps, "reps": reps}
    if mode == "derandomized":
        fam = build_perfect_hash_family(spi.universe_size, ncolors)
        for g in fam.functions:
            ok, sets = _packing_with_coloring(spi, Coloring(tuple(g), ncolors))
            if ok:
                return True, sets, {"functions": len(fam.functions)}
        return False, None, {"functions": len(fam.functions)}
    raise ValueError(f"unknown set packing mode {mode!r}")


def solve_util_set_packing(instance: Instance, mode: str = "exact-small", seed: int = 0) -> SolveResult:
    """f=1 utilitarian solver through the set-packing reduction."""
    spi = reduce_to_set_packing(instance)
    if instance.tau * instance.k > instance.election.m:
        return SolveResult(False, stats={"reason": "pigeonhole"})
    ok, sets, stats = solve_set_packing(spi, mode, seed)
    if not ok:
        return SolveResult(False, stats=stats)
    return checked_result(instance, sets, stats)


def solve_egal_horizon(instance: Instance, mode: str = "exact-small", seed: int = 0) -> SolveResult:
    """Egalitarian horizon solver: f-reduction, then packing of committees
    individually scoring at least eta."""
    if instance.alpha != EGAL:
        raise ValueError("this solver covers the egalitarian aggregate")
    reduced = egal_reduce(instance)
    scores = committee_scores(reduced.election, reduced.scoring, reduced.k)
    family = tuple(sorted((w, s) for w, s in scores.items() if s >= reduced.eta))
    if reduced.tau * reduced.k > instance.election.m or not family:
        return SolveResult(False, stats={"family": len(family)})
    spi = SetPackingInstance(instance.election.m, family, reduced.tau, 0)
    ok, sets, stats = solve_set_packing(spi, mode, seed)
    if not ok:
        return SolveResult(False, stats=stats)
    witness = expand_f1_witness(sets, instance.f, instance.tau)
    return checked_result(instance, witness, stats)


def solve_with_coloring(instance: Instance, coloring: Coloring) -> Optional[SolveResult]:
    """Filter committees to rainbow ones and run the window DP once."""
    scores = committee_scores(instance.election, instance.scoring, instance.k)
    entries = _rainbow_entries(sorted(scores.items()), coloring, instance.k)
    hit = _windowed_search(entries, instance.f, instance.tau, instance.eta, coloring)
    if hit is None:
        return None
    return checked_result(instance, hit[0], {"value": hit[1]})


def _color_guard(instance: Instance) -> None:
    if instance.k * instance.tau * (instance.f + 1) > 63:
        raise GuardExceeded("color window state would not fit the size guard")


def color_solve(instance: Instance, seed: int = 0, reps: Optional[int] = None) -> SolveResult:
    """Randomized color-coding solver for the utilitarian aggregate.

    Runs ceil(e^(k*tau)) independent colorings derived from one master seed
    (fewer if reps caps them).  A yes answer carries a re-validated witness;
    a no is correct with probability at least 1/2 on yes-instances and
    always on no-instances.
    """
    if instance.alpha != UTIL:
        raise ValueError("the color-coding solver covers the utilitarian aggregate")
    if instance.tau <= instance.f:
        return _short_series_shortcut(instance)
    _color_guard(instance)
    kt = instance.k * instance.tau
    if kt > RANDOM_KT_CAP:
        raise GuardExceeded("color-coding repetitions exceed the size guard")
    reps = math.ceil(math.exp(kt)) if reps is None else reps
    m = instance.election.m
    for rep in range(reps):
        rng = random.Random(seed * (2 ** 32) + rep)
        coloring = Coloring(tuple(rng.randrange(kt) for _ in range(m)), kt)
        result = solve_with_coloring(instance, coloring)
        if result is not None:
            result.stats.update({"reps_used": rep + 1, "reps": reps})
            return result
    return SolveResult(False, stats={"reps_used": reps, "reps": reps})


def solve_colorcoding_deterministic(instance: Instance) -> SolveResult:
    """Exact decision: the random coloring is replaced by a perfect hash family."""
    if instance.alpha != UTIL:
        raise ValueError("the color-coding solver covers the utilitarian aggregate")
    if instance.tau <= instance.f:
        return _short_series_shortcut(instance)
    _color_guard(instance)
    m = instance.election.m
    kt = instance.k * instance.tau
    fam = build_perfect_hash_family(m, kt)
    for g in fam.functions:
        result = solve_with_coloring(instance, Coloring(tuple(g), kt))
        if result is not None:
            result.stats["functions"] = len(fam.functions)
            return result
    return SolveResult(False, stats={"functions": len(fam.functions)})


# ---------------------------------------------------------------------------
# perfect hash families


def _next_prime(n: int) -> int:
    def is_prime(x):
        if x < 2:
            return False
        for d in range(2, int(x ** 0.5) + 1):
            if x % d == 0:
                return False
        return True

    while not is_prime(n):
        n += 1
    return n


GREEDY_LIMIT = 10**6
VERIFY_LIMIT = 50_000


def _greedy_family(p: int, q: int) -> list[tuple[int, ...]]:
    """Cover all q-subsets with seeded random functions, kept greedily."""
    uncovered = set(itertools.combinations(range(p), q))
    rng = random.Random(0xC0FFEE ^ (p * 1_000_003 + q))
    funcs: list[tuple[int, ...]] = []
    tries = 0
    while uncovered:
        tries += 1
        if tries > 200_000:
            raise RuntimeError("greedy hash family construction did not converge")
        g = tuple(rng.randrange(q) for _ in range(p))
        newly = {s for s in uncovered if len({g[x] for x in s}) == q}
        if newly:
            funcs.append(g)
            uncovered -= newly
    return funcs


def build_perfect_hash_family(p: int, q: int, mode: str = "auto") -> HashFamily:
    """Construct a (p, q)-perfect hash family.

    Small universes use a greedy cover directly; larger ones compose a
    prime-multiplier reduction into q*q cells with a precomputed
    (q*q, q)-perfect family.  The result is verified exhaustively whenever
    that is affordable.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    if q >= p:
        # when the palette is at least as large as the universe, one
        # injection colors every subset injectively
        return HashFamily((tuple(range(p)),), p, q)
    if q == 1:
        return HashFamily(((0,) * p,), p, q)
    if q > 8:
        raise GuardExceeded("hash family construction supports q <= 8")
    if mode == "auto":
        mode = "direct" if math.comb(p, q) <= GREEDY_LIMIT else "two-level"
    if mode == "direct":
        if math.comb(p, q) > GREEDY_LIMIT:
            raise GuardExceeded("direct greedy cover would exceed the size guard")
        fam = HashFamily(tuple(_greedy_family(p, q)), p, q)
    elif mode == "two-level":
        if math.comb(q * q, q) > GREEDY_LIMIT:
            raise GuardExceeded("second-level greedy cover would exceed the size guard")
        second = _greedy_family(q * q, q)
        prime = _next_prime(p + 1)
        cells = q * q
        funcs = []
        for a in range(1, prime):
            reduced = [((a * x) % prime) % cells for x in range(p)]
            for g in second:
                funcs.append(tuple(g[r] for r in reduced))
        fam = HashFamily(tuple(funcs), p, q)
    else:
        raise ValueError(f"unknown hash family mode {mode!r}")
    if math.comb(p, q) <= VERIFY_LIMIT and not verify_perfect_hash_family(fam):
        raise AssertionError("constructed hash family failed its perfectness check")
    return fam


def verify_perfect_hash_family(fam: HashFamily) -> bool:
    """Exhaustive check: every q-subset is injectively colored by some member."""
    size = min(fam.q, fam.p)
    for subset in itertools.combinations(range(fam.p), size):
        if not any(len({g[x] for x in subset}) == size for g in fam.functions):
            return False
    return True
