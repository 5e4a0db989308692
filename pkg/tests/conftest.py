"""Shared fixtures and independent reference checks."""
from __future__ import annotations

from fractions import Fraction

import pytest

from sce import APPROVAL, Election, ORDINAL, ids_of
from sce.bench import make_spec
from sce.generators import approval_bernoulli, ordinal_impartial_culture


def naive_series_check(committees, k: int, f: int) -> bool:
    """Definition-level frequency check: scan every candidate's index set.

    Deliberately independent of the library's streaming validator.
    """
    committees = list(committees)
    if any(w.bit_count() != k for w in committees):
        return False
    candidates = set()
    for w in committees:
        candidates.update(ids_of(w))
    for c in candidates:
        idx = [i for i, w in enumerate(committees) if (w >> (c - 1)) & 1]
        if idx[-1] - idx[0] + 1 != len(idx) or len(idx) > f:
            return False
    return True


def spec_variants(m: int):
    """The seven scoring variants the acceptance grid sweeps."""
    return [
        ("cc", make_spec("cc", m)),
        ("egal-cc", make_spec("egal-cc", m)),
        ("ws", make_spec("ws", m)),
        ("coverage", make_spec("coverage", m)),
        ("threshold-cc:1/2", make_spec("threshold-cc", m, gamma=Fraction(1, 2))),
        ("threshold-cc:1", make_spec("threshold-cc", m, gamma=Fraction(1, 1))),
        ("approval", make_spec("approval", m)),
    ]


def election_pair(m: int, n: int, seed: int) -> dict[str, Election]:
    return {
        ORDINAL: ordinal_impartial_culture(m, n, seed),
        APPROVAL: approval_bernoulli(m, n, Fraction(1, 2), seed),
    }


@pytest.fixture
def tiny_ordinal() -> Election:
    """Two voters over three candidates: 1>2>3 and 2>3>1."""
    return Election(ORDINAL, 3, 2, rankings=((1, 2, 3), (2, 3, 1)))


@pytest.fixture
def tiny_approval() -> Election:
    """Three voters over three candidates; candidate 1 approved by all."""
    return Election(APPROVAL, 3, 3, approvals=((1,), (1, 2), (1, 3)))
