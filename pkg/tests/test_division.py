"""Division enumeration, validation, and the per-division grid DP."""
import itertools

import pytest

from sce import (
    CC,
    EGAL,
    GuardExceeded,
    Instance,
    ScoringSpec,
    UTIL,
    enumerate_divisions,
    ids_of,
    mask_of,
    max_quality_exhaustive,
    solve_by_divisions,
    solve_division_dp,
    validate_division,
    validate_series,
)
from sce.division import (
    Division,
    division_space_witness,
    expand_multiplicities,
    unique_divisions,
)
from conftest import election_pair, spec_variants

FIG_DIVISION = Division(
    rho=tuple(range(1, 12)),
    primitives=(mask_of([1, 2, 3]), mask_of([4, 5, 6]), mask_of([5, 6, 7]), mask_of([7, 8, 9])),
    interims=(0, 0, mask_of([10, 11]), 0),
)


def test_reference_division_is_valid():
    assert validate_division(FIG_DIVISION, 3) is None


def test_wrong_interim_size_violates_e():
    bad = Division(FIG_DIVISION.rho, FIG_DIVISION.primitives, (0, 0, mask_of([10]), 0))
    violation = validate_division(bad, 3)
    assert violation is not None and violation.letter == "e"


def test_last_interim_must_be_empty():
    bad = Division(FIG_DIVISION.rho, FIG_DIVISION.primitives, (0, 0, mask_of([10, 11]), mask_of([10])))
    violation = validate_division(bad, 3)
    assert violation is not None and violation.letter == "c"


def test_remaining_condition_letters():
    rho = tuple(range(1, 12))
    prims = FIG_DIVISION.primitives
    not_interval = Division(rho, (mask_of([1, 2, 4]),) + prims[1:], (0, 0, 0, 0))
    assert validate_division(not_interval, 3).letter == "a"
    unordered = Division(rho, (prims[1], prims[0]), (0, 0))
    assert validate_division(unordered, 3).letter == "b"
    overlapping_f = Division(rho, prims, (0, mask_of([10]), mask_of([10, 11]), 0))
    assert validate_division(overlapping_f, 3).letter in ("d", "e")
    disjoint_f = Division(rho, (prims[0], prims[1]), (mask_of([7, 8, 9]),) + (0,))
    assert validate_division(disjoint_f, 3).letter == "f"
    inside_primitive = Division(rho, prims, (0, 0, mask_of([4, 10]), 0))
    assert validate_division(inside_primitive, 3).letter == "g"


def test_every_enumerated_division_validates():
    for m, k in [(3, 1), (3, 2), (4, 2), (4, 3), (5, 3)]:
        for div in enumerate_divisions(m, k):
            assert validate_division(div, k) is None


def test_full_candidate_set_gives_one_division_per_order():
    divisions = list(enumerate_divisions(3, 3))
    assert len(divisions) == 6  # one per permutation
    assert all(div.primitives == (mask_of([1, 2, 3]),) and div.interims == (0,) for div in divisions)
    assert len(unique_divisions(3, 3)) == 1


def test_reference_division_is_enumerated():
    hit = False
    for i, div in enumerate(enumerate_divisions(11, 3)):
        if (div.primitives, div.interims) == (FIG_DIVISION.primitives, FIG_DIVISION.interims):
            hit = True
            break
        if i > 100_000:
            break
    assert hit


def _all_valid_triples(m, k):
    """Independent filter: every (rho, primitives, interims) combination that
    passes validate_division, with interims unconstrained subsets."""
    candidates = list(range(1, m + 1))
    all_k_masks = [w for w in range(1, 1 << m) if w.bit_count() == k]
    for rho in itertools.permutations(candidates):
        for d in range(1, m + 1):
            for prims in itertools.permutations(all_k_masks, d):
                used = 0
                for p in prims:
                    used |= p
                free = [c for c in candidates if not (used >> (c - 1)) & 1]
                options = []
                for i in range(d):
                    subsets = [0]
                    for r in range(1, len(free) + 1):
                        subsets.extend(mask_of(combo) for combo in itertools.combinations(free, r))
                    options.append(subsets)
                for interims in itertools.product(*options):
                    div = Division(tuple(rho), tuple(prims), tuple(interims))
                    if validate_division(div, k) is None:
                        yield div


def _space(div, k, tau, f):
    """Every frequency-valid series in a division's space, by enumeration."""
    out = set()
    d = div.d

    def rec(i, total, qs, us):
        if i > d:
            if total == tau:
                series = expand_multiplicities(div, qs, us)
                if validate_series(series, k, f) is None:
                    out.add(series)
            return
        has_inter = i < d and div.intermediate(i) is not None
        for q in range(1, f + 1):
            for u in range(0, (f if has_inter else 0) + 1):
                if total + q + u <= tau:
                    rec(i + 1, total + q + u, qs + [q], us + [u])

    rec(1, 0, [], [])
    return out


def test_double_enumeration_m3_k2():
    """The guessed divisions cover exactly the series any valid triple covers."""
    enumerated = list(enumerate_divisions(3, 2))
    assert len(enumerated) == 12  # frozen: two endpoint choices per order
    for tau in (1, 2, 3):
        for f in (1, 2):
            ours = set()
            for div in enumerated:
                ours |= _space(div, 2, tau, f)
            theirs = set()
            for div in _all_valid_triples(3, 2):
                theirs |= _space(div, 2, tau, f)
            assert ours == theirs


def _counts_within_cap(div, qs, us, f):
    """Arithmetic frequency check on a multiplicity assignment: a candidate in
    primitive rows lo..hi appears sum(q[lo..hi]) + sum(u[lo..hi-1]) times in a
    row; an interim candidate appears u_i times."""
    d = div.d
    for c in range(1, 12):
        bit = 1 << (c - 1)
        rows = [i for i in range(1, d + 1) if div.primitives[i - 1] & bit]
        if rows:
            lo, hi = rows[0], rows[-1]
            count = sum(qs[i - 1] for i in range(lo, hi + 1))
            count += sum(us[i - 1] for i in range(lo, hi))
            if count > f:
                return False
        else:
            for i in range(1, d):
                if div.interims[i - 1] & bit and us[i - 1] > f:
                    return False
    return True


def test_space_membership_matches_arithmetic_counts():
    """Every multiplicity assignment expands to a series that the validator
    accepts exactly when the per-candidate count arithmetic stays within f."""
    import itertools as it

    for div in unique_divisions(4, 2)[::5]:
        d = div.d
        for f in (1, 2, 3):
            ranges = []
            for i in range(1, d + 1):
                has_inter = i < d and div.intermediate(i) is not None
                ranges.append([(q, u) for q in range(1, f + 1)
                               for u in range(0, (f if has_inter else 0) + 1)])
            for combo in it.product(*ranges):
                qs = [q for q, _ in combo]
                us = [u for _, u in combo]
                series = expand_multiplicities(div, qs, us)
                valid = validate_series(series, 2, f) is None
                assert valid == _counts_within_cap(div, qs, us, f), (div, qs, us, f)


def test_single_primitive_dp(tiny_ordinal):
    # d=1: the space is "repeat the primitive t times, t <= f"
    div = Division((1, 2, 3), (mask_of([1, 2]),), (0,))
    spec = ScoringSpec(CC)
    for tau, f in [(1, 1), (2, 2), (3, 2)]:
        inst = Instance(tiny_ordinal, spec, tau, 2, f, 0, UTIL)
        expect = tau <= f
        assert solve_division_dp(div, inst).feasible == expect


def test_division_dp_agrees_with_space_enumeration():
    for seed in range(2):
        for kind, election in election_pair(4, 3, seed).items():
            for label, spec in spec_variants(4):
                if spec.kind != kind:
                    continue
                for div in unique_divisions(4, 2)[::7]:
                    for alpha in (UTIL, EGAL):
                        for tau, f in [(2, 1), (3, 2), (2, 2)]:
                            for eta in (0, 2, 5):
                                inst = Instance(election, spec, tau, 2, f, eta, alpha)
                                got = solve_division_dp(div, inst)
                                want = division_space_witness(div, inst) is not None
                                assert got.feasible == want, (label, div, alpha, tau, f, eta)
                                assert got.stats.get("space_fallback", 0) == 0


def test_solve_by_divisions_matches_oracle():
    for m in (3, 4):
        for seed in range(2):
            for kind, election in election_pair(m, 3, seed).items():
                for label, spec in spec_variants(m):
                    if spec.kind != kind:
                        continue
                    for alpha in (UTIL, EGAL):
                        for tau, k, f in [(2, 2, 1), (3, 1, 2), (3, 2, 2)]:
                            if k > m:
                                continue
                            base = Instance(election, spec, tau, k, f, 0, alpha)
                            best = max_quality_exhaustive(base)
                            etas = [0, 1] if best is None else sorted({0, best, best + 1})
                            for eta in etas:
                                inst = Instance(election, spec, tau, k, f, eta, alpha)
                                res = solve_by_divisions(inst)
                                want = best is not None and best >= eta
                                assert res.feasible == want, (label, alpha, tau, k, f, eta)
                                if res.feasible:
                                    assert validate_series(res.witness, k, f) is None
                                    assert res.quality >= eta


def test_solve_by_divisions_m5_f3():
    # the broader frequency range on the largest grid the solver accepts
    for seed in range(2):
        for kind, election in election_pair(5, 3, seed).items():
            for label, spec in spec_variants(5)[::3]:
                if spec.kind != kind:
                    continue
                for alpha in (UTIL, EGAL):
                    for tau, k in [(4, 2), (4, 3)]:
                        base = Instance(election, spec, tau, k, 3, 0, alpha)
                        best = max_quality_exhaustive(base)
                        etas = [0, 1] if best is None else sorted({0, best, best + 1})
                        for eta in etas:
                            inst = Instance(election, spec, tau, k, 3, eta, alpha)
                            want = best is not None and best >= eta
                            assert solve_by_divisions(inst).feasible == want, (label, alpha, tau, k, eta)


def test_relabeling_invariance():
    for kind, election in election_pair(4, 3, 1).items():
        for label, spec in spec_variants(4)[:2]:
            if spec.kind != kind:
                continue
            inst = Instance(election, spec, 2, 2, 1, 3, UTIL)
            base = solve_by_divisions(inst).feasible
            perm = (3, 1, 4, 2)
            relabeled = type(election)(
                kind, 4, 3,
                rankings=tuple(tuple(perm[c - 1] for c in r) for r in election.rankings),
            )
            assert solve_by_divisions(Instance(relabeled, spec, 2, 2, 1, 3, UTIL)).feasible == base


def test_m_guard():
    from sce import Election, ORDINAL
    e = Election(ORDINAL, 9, 1, rankings=(tuple(range(1, 10)),))
    with pytest.raises(GuardExceeded):
        solve_by_divisions(Instance(e, ScoringSpec(CC), 1, 2, 1, 0, UTIL))
