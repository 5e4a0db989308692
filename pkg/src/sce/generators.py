"""Synthetic election generators, deterministic per seed."""
from __future__ import annotations

import random
from fractions import Fraction

from .model import APPROVAL, Election, ORDINAL


def ordinal_impartial_culture(m: int, n: int, seed: int) -> Election:
    """Every voter ranks the candidates by an independent uniform shuffle."""
    rng = random.Random(seed)
    rankings = []
    for _ in range(n):
        order = list(range(1, m + 1))
        rng.shuffle(order)
        rankings.append(tuple(order))
    return Election(ORDINAL, m, n, rankings=tuple(rankings))


def approval_bernoulli(m: int, n: int, p: Fraction, seed: int) -> Election:
    """Each voter approves each candidate independently with probability p.

    p is an exact fraction; the draw compares an integer below the
    denominator against the numerator, so p=1 approves everything.
    """
    if not 0 <= p <= 1:
        raise ValueError("approval probability must lie in [0, 1]")
    rng = random.Random(seed)
    approvals = []
    for _ in range(n):
        approved = tuple(c for c in range(1, m + 1) if rng.randrange(p.denominator) < p.numerator)
        approvals.append(approved)
    return Election(APPROVAL, m, n, approvals=tuple(approvals))
