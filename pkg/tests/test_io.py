"""Election file format, witness files, and the synthetic generators."""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sce import (
    APPROVAL,
    Election,
    ORDINAL,
    ParseError,
    approval_bernoulli,
    ids_of,
    mask_of,
    ordinal_impartial_culture,
    parse_election,
    parse_series,
    serialize_election,
    serialize_series,
)


def test_parse_ordinal_example():
    text = "SCE 1\nTYPE ORDINAL\nCANDIDATES 3\nVOTERS 1\n2 1 3\n"
    e = parse_election(text)
    assert e.kind == ORDINAL and e.m == 3 and e.n == 1
    assert e.rankings == ((2, 1, 3),)


def test_parse_approval_empty_set():
    text = "SCE 1\nTYPE APPROVAL\nCANDIDATES 3\nVOTERS 2\n-\n1 3\n"
    e = parse_election(text)
    assert e.approvals == ((), (1, 3))


def test_comments_and_blank_lines():
    text = "# corpus file\nSCE 1\n\nTYPE ORDINAL # with a comment\nCANDIDATES 2\nVOTERS 1\n2 1\n"
    assert parse_election(text).rankings == ((2, 1),)


@pytest.mark.parametrize(
    "text, line",
    [
        ("SCE 2\nTYPE ORDINAL\nCANDIDATES 2\nVOTERS 1\n1 2\n", 1),
        ("SCE 1\nTYPE RANKED\nCANDIDATES 2\nVOTERS 1\n1 2\n", 2),
        ("SCE 1\nTYPE ORDINAL\nCANDIDATES x\nVOTERS 1\n1 2\n", 3),
        ("SCE 1\nTYPE ORDINAL\nCANDIDATES 3\nVOTERS 1\n1 1 2\n", 5),
        ("SCE 1\nTYPE ORDINAL\nCANDIDATES 3\nVOTERS 1\n1 2 4\n", 5),
        ("SCE 1\nTYPE ORDINAL\nCANDIDATES 3\nVOTERS 2\n1 2 3\n", 5),
        ("SCE 1\nTYPE APPROVAL\nCANDIDATES 3\nVOTERS 1\n2 2\n", 5),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_election(text)
    assert err.value.line_no == line


def test_wrong_ballot_count_too_many():
    text = "SCE 1\nTYPE ORDINAL\nCANDIDATES 2\nVOTERS 1\n1 2\n2 1\n"
    with pytest.raises(ParseError):
        parse_election(text)


def test_round_trip_generated_corpora():
    for seed in range(25):
        for e in (
            ordinal_impartial_culture(4, 3, seed),
            approval_bernoulli(5, 4, Fraction(1, 3), seed),
        ):
            assert parse_election(serialize_election(e)) == e


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_round_trip_arbitrary_elections(data):
    m = data.draw(st.integers(1, 6))
    n = data.draw(st.integers(1, 5))
    if data.draw(st.booleans()):
        perms = data.draw(st.lists(st.permutations(list(range(1, m + 1))), min_size=n, max_size=n))
        e = Election(ORDINAL, m, n, rankings=tuple(tuple(p) for p in perms))
    else:
        sets = data.draw(
            st.lists(st.sets(st.integers(1, m)), min_size=n, max_size=n)
        )
        e = Election(APPROVAL, m, n, approvals=tuple(tuple(sorted(s)) for s in sets))
    assert parse_election(serialize_election(e)) == e


def test_generator_determinism():
    a = serialize_election(ordinal_impartial_culture(5, 4, 99))
    b = serialize_election(ordinal_impartial_culture(5, 4, 99))
    assert a == b
    assert serialize_election(approval_bernoulli(4, 3, Fraction(1, 2), 7)) == serialize_election(
        approval_bernoulli(4, 3, Fraction(1, 2), 7)
    )


def test_generator_full_approval():
    e = approval_bernoulli(4, 3, Fraction(1, 1), 5)
    assert all(a == (1, 2, 3, 4) for a in e.approvals)


def test_ordinal_lines_always_permutations():
    for seed in range(10):
        e = ordinal_impartial_culture(6, 4, seed)
        assert parse_election(serialize_election(e)) == e
        for r in e.rankings:
            assert sorted(r) == list(range(1, 7))


def test_series_files():
    committees = (mask_of([1, 2]), mask_of([3, 4]))
    text = serialize_series(committees)
    assert text == "1 2\n3 4\n"
    assert parse_series(text, 4) == committees
    with pytest.raises(ParseError):
        parse_series("1 5\n", 4)
    with pytest.raises(ParseError):
        parse_series("# only a comment\n", 4)
