"""Few-candidate solvers.

Three routes, all exponential only in the number of candidates:

* ``solve_polymult_f1``: for f=1 the problem is packing tau disjoint size-k
  committees of sufficient total (or uniformly high) score.  Partial packings
  are kept as sparse polynomials whose monomial exponents are candidate
  masks; multiplying by a committee's monomial and keeping only exponents of
  full Hamming weight detects disjointness (a carry in the exponent addition
  collapses the weight).
* ``egal_reduce``: an egalitarian instance with f >= 2 is equivalent to one
  with f=1 and ceil(tau/f) committees; a witness expands back by repeating
  each committee f times and truncating.
* ``solve_subset_dp``: a memoized recursion over (available candidates,
  committees still to place, residual score demand, pending service
  obligations) that handles any f for the utilitarian aggregate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional

from .model import (
    EGAL,
    GuardExceeded,
    Instance,
    SolveResult,
    UTIL,
    checked_result,
    committee_scores,
)


@dataclass(frozen=True)
class LayerPolynomial:
    """Sparse polynomial at one (used-candidates, committees, score) level.

    Every monomial exponent is stored as a candidate mask of Hamming weight
    equal to the level's used-candidate count; coefficients are normalized
    to one, so a set of masks is the whole representation.
    """

    level: tuple[int, int, int]
    monomials: frozenset[int]


def _polymult_guard(m: int, eta: int) -> None:
    if m > 22 or (eta + 1) * (2 ** m) > 5 * 10**8:
        raise GuardExceeded("polynomial-multiplication table would exceed the size guard")


def _util_layers(election, spec, k: int, tau: int, eta: int):
    """Layer sets p[j][ell] plus one recorded predecessor per monomial."""
    scores = committee_scores(election, spec, k)
    committees = sorted(scores)
    target_weight = {j: j * k for j in range(1, tau + 1)}
    layers: dict[int, list[set[int]]] = {1: [set() for _ in range(eta + 1)]}
    parents: dict[tuple[int, int, int], tuple[int, int, int]] = {}
    for ell in range(eta + 1):
        for y in committees:
            if scores[y] >= ell:
                layers[1][ell].add(y)
    for j in range(2, tau + 1):
        prev_sorted = [sorted(layers[j - 1][ell]) for ell in range(eta + 1)]
        cur = [set() for _ in range(eta + 1)]
        for ell in range(eta + 1):
            seen = cur[ell]
            for y in committees:
                rest = max(0, ell - scores[y])
                for x in prev_sorted[rest]:
                    z = x + y
                    if z.bit_count() != target_weight[j] or z in seen:
                        continue
                    seen.add(z)
                    parents[(j, ell, z)] = (y, rest, x)
        layers[j] = cur
    return layers, parents


def _egal_layers(election, spec, k: int, tau: int, eta: int):
    """Single layer set per committee count; only committees scoring >= eta."""
    scores = committee_scores(election, spec, k)
    eligible = sorted(y for y, s in scores.items() if s >= eta)
    layers: dict[int, set[int]] = {1: set(eligible)}
    parents: dict[tuple[int, int], tuple[int, int]] = {}
    for j in range(2, tau + 1):
        prev_sorted = sorted(layers[j - 1])
        cur: set[int] = set()
        for y in eligible:
            for x in prev_sorted:
                z = x + y
                if z.bit_count() != j * k or z in cur:
                    continue
                cur.add(z)
                parents[(j, z)] = (y, x)
        layers[j] = cur
    return layers, parents


def build_layer_polynomials(instance: Instance, alpha: Optional[str] = None) -> list[LayerPolynomial]:
    """All nonempty layers the f=1 solver would build, for inspection."""
    alpha = alpha or instance.alpha
    k, tau, eta = instance.k, instance.tau, instance.eta
    out = []
    if alpha == UTIL:
        layers, _ = _util_layers(instance.election, instance.scoring, k, tau, eta)
        for j, by_ell in layers.items():
            for ell, masks in enumerate(by_ell):
                if masks:
                    out.append(LayerPolynomial((j * k, j, ell), frozenset(masks)))
    else:
        layers, _ = _egal_layers(instance.election, instance.scoring, k, tau, eta)
        for j, masks in layers.items():
            if masks:
                out.append(LayerPolynomial((j * k, j, eta), frozenset(masks)))
    return out


def solve_polymult_f1(instance: Instance, alpha: Optional[str] = None) -> SolveResult:
    """Decide an f=1 instance by sparse polynomial multiplication."""
    if instance.f != 1:
        raise ValueError("polynomial-multiplication solver requires f = 1")
    alpha = alpha or instance.alpha
    _polymult_guard(instance.election.m, instance.eta)
    k, tau, eta = instance.k, instance.tau, instance.eta
    if alpha == UTIL:
        layers, parents = _util_layers(instance.election, instance.scoring, k, tau, eta)
        final = layers[tau][eta]
        if not final:
            return SolveResult(False, stats={"layers": sum(len(s) for ls in layers.values() for s in ls)})
        mask = min(final)
        chain = []
        j, ell = tau, eta
        while j > 1:
            y, ell, mask_prev = parents[(j, ell, mask)]
            chain.append(y)
            mask, j = mask_prev, j - 1
        chain.append(mask)
        return checked_result(instance, tuple(reversed(chain)))
    layers, parents = _egal_layers(instance.election, instance.scoring, k, tau, eta)
    final = layers[tau]
    if not final:
        return SolveResult(False, stats={"layers": sum(len(s) for s in layers.values())})
    mask = min(final)
    chain = []
    j = tau
    while j > 1:
        y, mask_prev = parents[(j, mask)]
        chain.append(y)
        mask, j = mask_prev, j - 1
    chain.append(mask)
    return checked_result(instance, tuple(reversed(chain)))


def egal_reduce(instance: Instance) -> Instance:
    """Rewrite an egalitarian instance to an equivalent one with f = 1.

    Forward: repeating each of ceil(tau/f) disjoint committees f times and
    truncating to tau keeps every committee score >= eta and every candidate
    within f consecutive slots.  Backward: committees 1, f+1, 2f+1, ... of
    any feasible series are pairwise disjoint, because a shared candidate
    would have to serve in more than f consecutive committees.
    """
    if instance.alpha != EGAL:
        raise ValueError("the f-reduction applies to egalitarian instances only")
    return Instance(
        election=instance.election,
        scoring=instance.scoring,
        tau=-(-instance.tau // instance.f),
        k=instance.k,
        f=1,
        eta=instance.eta,
        alpha=EGAL,
    )


def expand_f1_witness(committees: tuple[int, ...], f: int, tau: int) -> tuple[int, ...]:
    """Inverse of egal_reduce on witnesses: f copies of each, cut to tau."""
    expanded: list[int] = []
    for w in committees:
        expanded.extend([w] * f)
    return tuple(expanded[:tau])


def solve_polymult(instance: Instance) -> SolveResult:
    """Polynomial-multiplication front end: applies the f-reduction for egal."""
    if instance.f == 1:
        return solve_polymult_f1(instance)
    if instance.alpha != EGAL:
        raise ValueError("polynomial multiplication handles f >= 2 only via the egalitarian reduction")
    reduced = egal_reduce(instance)
    res = solve_polymult_f1(reduced)
    if not res.feasible:
        return res
    witness = expand_f1_witness(res.witness.committees, instance.f, instance.tau)
    return checked_result(instance, witness, res.stats)


class _SubsetEngine:
    """Memoized recursion F(available, remaining, demand, obligations).

    obligations[x] is the mask of candidates that must serve in exactly the
    next x+1 committees (counting the one about to be placed) and then
    retire.  New members of a committee choose how long their service block
    will run; retirees leave the available pool for good.
    """

    def __init__(self, committees: list[int], scores: dict[int, int], f: int):
        self.committees = committees
        self.scores = scores
        self.f = f
        # state -> [best demand proven satisfiable, worst demand proven not]
        self.bounds: dict[tuple, list] = {}

    def query(self, available: int, j: int, demand: int, obligations: tuple[int, ...]) -> bool:
        demand = max(0, demand)
        if j == 0:
            return demand == 0
        key = (available, j, obligations)
        bound = self.bounds.get(key)
        if bound is None:
            bound = [-1, None]  # true for demand <= bound[0]; false for demand >= bound[1]
            self.bounds[key] = bound
        if demand <= bound[0]:
            return True
        if bound[1] is not None and demand >= bound[1]:
            return False
        result = self._search(available, j, demand, obligations, None)
        if result:
            bound[0] = max(bound[0], demand)
        else:
            bound[1] = demand if bound[1] is None else min(bound[1], demand)
        return result

    def _search(self, available: int, j: int, demand: int, obligations: tuple[int, ...], record):
        f = self.f
        union = 0
        for g in obligations:
            union |= g
        for w in self.committees:
            if w & ~available or union & ~w:
                continue
            entrants = w & ~union
            bits = []
            b = entrants
            while b:
                low = b & -b
                bits.append(low)
                b ^= low
            child_demand = max(0, demand - self.scores[w])
            for lengths in product(range(f), repeat=len(bits)):
                groups = [0] * f  # groups[r]: entrants owing r more committees
                for bit, r in zip(bits, lengths):
                    groups[r] |= bit
                retire = (obligations[0] if obligations else 0) | groups[0]
                nxt = tuple(
                    (obligations[x + 1] if x + 1 < len(obligations) else 0) | groups[x + 1]
                    for x in range(f - 1)
                )
                if self.query(available & ~retire, j - 1, child_demand, nxt):
                    if record is not None:
                        record.append((w, nxt, available & ~retire, child_demand))
                    return True
        return False

    def witness(self, available: int, j: int, demand: int, obligations: tuple[int, ...]) -> tuple[int, ...]:
        chain: list[int] = []
        demand = max(0, demand)
        while j > 0:
            record: list = []
            if not self._search(available, j, demand, obligations, record):
                raise AssertionError("witness re-descent diverged from the decision")
            w, obligations, available, demand = record[0]
            chain.append(w)
            j -= 1
        return tuple(reversed(chain))


def _subset_guard(instance: Instance) -> None:
    m = instance.election.m
    if m > 22:
        raise GuardExceeded("subset DP supports at most 22 candidates")
    states = (2 ** m) * instance.tau * (instance.eta + 2) * (instance.f ** instance.k)
    if states > 2 * 10**9:
        raise GuardExceeded("subset DP table would exceed the size guard")


def solve_subset_dp(instance: Instance) -> SolveResult:
    """General-f committee DP; egalitarian instances go through egal_reduce."""
    _subset_guard(instance)
    full = (1 << instance.election.m) - 1
    if instance.alpha == UTIL:
        scores = committee_scores(instance.election, instance.scoring, instance.k)
        engine = _SubsetEngine(sorted(scores), scores, instance.f)
        start = (full, instance.tau, instance.eta, (0,) * (instance.f - 1))
        if not engine.query(*start):
            return SolveResult(False, stats={"states": len(engine.bounds)})
        witness = engine.witness(*start)
        return checked_result(instance, witness, {"states": len(engine.bounds)})
    reduced = egal_reduce(instance)
    scores = committee_scores(reduced.election, reduced.scoring, reduced.k)
    eligible = sorted(w for w, s in scores.items() if s >= reduced.eta)
    engine = _SubsetEngine(eligible, scores, 1)
    start = (full, reduced.tau, 0, ())
    if not engine.query(*start):
        return SolveResult(False, stats={"states": len(engine.bounds)})
    witness = expand_f1_witness(engine.witness(*start), instance.f, instance.tau)
    return checked_result(instance, witness, {"states": len(engine.bounds)})
