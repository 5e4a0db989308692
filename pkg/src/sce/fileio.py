"""The election text format and witness series files.

Election files are ASCII with LF line endings; '#' starts a comment that
runs to the end of the line and blank lines are skipped:

    SCE 1
    TYPE ORDINAL            (or TYPE APPROVAL)
    CANDIDATES 3
    VOTERS 2
    2 1 3                   one ballot line per voter
    3 2 1

Ordinal ballots list all m candidate ids best to worst.  Approval ballots
list the approved ids, or a single '-' for an empty set.  Witness files hold
one committee per line, ids ascending.
"""
from __future__ import annotations

from .model import APPROVAL, Election, ORDINAL


class ParseError(ValueError):
    """Malformed input file; carries the 1-based source line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _content_lines(text: str):
    """(line_no, stripped content) for every non-empty, non-comment line."""
    for no, raw in enumerate(text.split("\n"), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_no, f"{what} is not an integer: {token!r}") from None


def parse_election(text: str) -> Election:
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "SCE 1":
        raise ParseError(lines[0][0] if lines else 1, "bad magic, expected 'SCE 1'")
    if len(lines) < 4:
        raise ParseError(lines[-1][0], "incomplete header")
    no, type_line = lines[1]
    parts = type_line.split()
    if len(parts) != 2 or parts[0] != "TYPE" or parts[1] not in ("ORDINAL", "APPROVAL"):
        raise ParseError(no, "expected 'TYPE ORDINAL' or 'TYPE APPROVAL'")
    kind = ORDINAL if parts[1] == "ORDINAL" else APPROVAL
    no, cand_line = lines[2]
    parts = cand_line.split()
    if len(parts) != 2 or parts[0] != "CANDIDATES":
        raise ParseError(no, "expected 'CANDIDATES <m>'")
    m = _parse_int(parts[1], no, "candidate count")
    if m < 1:
        raise ParseError(no, "candidate count must be positive")
    no, voter_line = lines[3]
    parts = voter_line.split()
    if len(parts) != 2 or parts[0] != "VOTERS":
        raise ParseError(no, "expected 'VOTERS <n>'")
    n = _parse_int(parts[1], no, "voter count")
    if n < 1:
        raise ParseError(no, "voter count must be positive")
    ballots = lines[4:]
    if len(ballots) != n:
        at = ballots[n][0] if len(ballots) > n else (ballots[-1][0] if ballots else lines[3][0])
        raise ParseError(at, f"expected {n} ballot lines, found {len(ballots)}")
    rankings = []
    approvals = []
    for no, body in ballots:
        if kind == ORDINAL:
            ids = [_parse_int(t, no, "candidate id") for t in body.split()]
            _check_ids(ids, m, no)
            if len(ids) != m:
                raise ParseError(no, f"ranking lists {len(ids)} candidates, expected {m}")
            rankings.append(tuple(ids))
        else:
            if body == "-":
                approvals.append(())
                continue
            ids = [_parse_int(t, no, "candidate id") for t in body.split()]
            _check_ids(ids, m, no)
            approvals.append(tuple(sorted(ids)))
    if kind == ORDINAL:
        return Election(ORDINAL, m, n, rankings=tuple(rankings))
    return Election(APPROVAL, m, n, approvals=tuple(approvals))


def _check_ids(ids, m: int, line_no: int) -> None:
    seen = set()
    for c in ids:
        if not 1 <= c <= m:
            raise ParseError(line_no, f"candidate id {c} out of range 1..{m}")
        if c in seen:
            raise ParseError(line_no, f"duplicate candidate id {c}")
        seen.add(c)


def serialize_election(election: Election) -> str:
    lines = [
        "SCE 1",
        f"TYPE {'ORDINAL' if election.kind == ORDINAL else 'APPROVAL'}",
        f"CANDIDATES {election.m}",
        f"VOTERS {election.n}",
    ]
    if election.kind == ORDINAL:
        lines.extend(" ".join(map(str, r)) for r in election.rankings)
    else:
        lines.extend(" ".join(map(str, a)) if a else "-" for a in election.approvals)
    return "\n".join(lines) + "\n"


def parse_series(text: str, m: int) -> tuple[int, ...]:
    """Witness file: one committee per line, space-separated candidate ids."""
    from .model import mask_of

    committees = []
    for no, body in _content_lines(text):
        ids = [_parse_int(t, no, "candidate id") for t in body.split()]
        _check_ids(ids, m, no)
        committees.append(mask_of(ids))
    if not committees:
        raise ParseError(1, "series file holds no committees")
    return tuple(committees)


def serialize_series(committees) -> str:
    from .model import ids_of

    return "\n".join(" ".join(map(str, ids_of(w))) for w in committees) + "\n"
