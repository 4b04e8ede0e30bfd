import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from w3sat.core import Clause, Instance, canonicalize
from w3sat.errors import EmptyClauseInput, ParseError, VarOutOfRange, WidthTooLarge
from w3sat.io import (
    detect_format,
    emit_dimacs,
    emit_paper_lists,
    parse_dimacs,
    parse_instance,
    parse_paper_lists,
)


def test_dimacs_unit_pair():
    inst = parse_dimacs("p cnf 2 2\n1 0\n-1 0\n")
    assert inst == Instance(2, (Clause.of(1), Clause.of(-1)))


def test_dimacs_tautology_dropped():
    inst = parse_dimacs("p cnf 3 1\n1 -1 2 0\n")
    assert inst.clauses == () and inst.tautologies_dropped == 1


def test_dimacs_out_of_range_before_width():
    with pytest.raises(VarOutOfRange):
        parse_dimacs("p cnf 3 1\n1 2 3 4 0\n")


def test_dimacs_too_wide():
    with pytest.raises(WidthTooLarge) as exc:
        parse_dimacs("p cnf 4 2\n1 0\n1 2 3 4 0\n")
    assert exc.value.clause_index == 1


def test_dimacs_comments_split_clauses_and_trailer():
    text = "c hello\np cnf 3 2\n1 2\n 3 0 -1\n0\n%\n0\n"
    inst = parse_dimacs(text)
    assert inst.clauses == (Clause.of(1, 2, 3), Clause.of(-1))


@pytest.mark.parametrize("text,line", [
    ("1 2 0\n", 1),
    ("p cnf 2 1\n1 x 0\n", 2),
    ("p cnf 2\n1 0\n", 1),
    ("p cnf 2 1\n1 2\n", 2),
])
def test_dimacs_syntax_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_dimacs(text)
    assert exc.value.line == line


def test_dimacs_empty_clause():
    with pytest.raises(EmptyClauseInput):
        parse_dimacs("p cnf 2 1\n0\n")


def test_dimacs_count_mismatch_warns(caplog):
    with caplog.at_level(logging.WARNING):
        parse_dimacs("p cnf 2 3\n1 0\n")
    assert "declares 3" in caplog.text


def test_list_format_examples():
    inst = parse_paper_lists("[[-1,2,3],[1,4,5]]")
    assert inst.n_vars == 5 and len(inst.clauses) == 2
    assert parse_paper_lists("[]") == Instance(0, ())
    assert parse_paper_lists("[]", n_vars=4).n_vars == 4
    assert parse_paper_lists("[[1,1,2]]").clauses == (Clause.of(1, 2),)


def test_list_format_errors():
    with pytest.raises(ParseError) as exc:
        parse_paper_lists("[[1,2],")
    assert exc.value.position is not None
    with pytest.raises(ParseError):
        parse_paper_lists("[[1, 0]]")
    with pytest.raises(ParseError):
        parse_paper_lists("[[1.5]]")
    with pytest.raises(EmptyClauseInput):
        parse_paper_lists("[[]]")
    with pytest.raises(VarOutOfRange):
        parse_paper_lists("[[1, 5]]", n_vars=3)


def test_format_detection():
    assert detect_format("  [[1]]") == "paper"
    assert detect_format("c x\np cnf 1 1\n1 0\n") == "dimacs"
    inst = parse_instance("p cnf 2 1\n1 0\n", n_vars=5)
    assert inst.n_vars == 5


instances = st.integers(1, 9).flatmap(lambda n: st.builds(
    lambda cls: Instance(n, tuple(c for c in cls if c is not None)),
    st.lists(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v))),
                      min_size=1, max_size=3).map(
        lambda raw: c if isinstance(c := canonicalize(raw), Clause) else None),
        max_size=15)))


@given(instances)
def test_dimacs_round_trip(inst):
    text = emit_dimacs(inst)
    again = parse_dimacs(text)
    assert again == inst
    assert emit_dimacs(again) == text


@given(instances)
def test_list_round_trip(inst):
    text = emit_paper_lists(inst)
    again = parse_paper_lists(text, n_vars=inst.n_vars)
    assert again == inst
    assert emit_paper_lists(again) == text
