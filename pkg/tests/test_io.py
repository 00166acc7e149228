import random

import pytest
from hypothesis import given, settings, strategies as st

from attackreduce import EventLabel, InvalidArgument
from attackreduce.fixtures import water_tank_files
from attackreduce.io import (ParseError, load_model, parse_alphabet, parse_model,
                             render_alphabet, render_model)

from _gen import isomorphic, random_alphabet, random_attacker, random_dfa, plain


def test_two_line_model():
    a = parse_model("states: s\nmarked: *\n")
    assert a.state_names == ("s",)
    assert a.state_names[a.initial] == "s"
    assert a.marked == frozenset({0})
    assert a.alphabet == frozenset()


def test_plant_file():
    g = load_model(water_tank_files()["plant"])
    assert g.name == "G"
    assert g.n_states == 11
    assert [g.state_names[q] for q in g.marked] == ["g6"]
    assert g.run([EventLabel.plain(x) for x in "H close EH".split()]) == g.state("g6")


def test_missing_marked_means_none():
    a = parse_model("states: s t\ntransitions:\ns x t\n")
    assert a.marked == frozenset()


def test_comments_and_attacked_labels():
    text = ("# a header comment\n"
            "automaton A\n"
            "states: q0 q1\n"
            "  # indented comment\n"
            "marked: *\n"
            "transitions:\n"
            "q0 H q1\n"
            "q1 L# q0\n")
    a = parse_model(text)
    assert a.step(a.state("q1"), EventLabel.attacked("L")) == a.state("q0")
    assert EventLabel.attacked("L") in a.alphabet


@pytest.mark.parametrize("text, line, fragment", [
    ("states: s t\ntransitions:\ns a t\ns a s\n", 4, "first on line 3"),
    ("states: s\ntransitions:\ns a u\n", 3, "undeclared state 'u'"),
    ("states: s\ntransitions:\ns cmd{a s\n", 3, ""),
    ("states: s\ntransitions:\ns a\n", 3, "<src> <label> <dst>"),
    ("states: s s\n", 1, "duplicate state"),
    ("states: s\nfoo\n", 2, "unexpected line"),
    ("states: s\ninitial: s t\n", 2, "one initial"),
])
def test_parse_errors_carry_line(text, line, fragment):
    with pytest.raises(ParseError) as ei:
        parse_model(text, source="m.fsa")
    assert ei.value.line == line
    assert str(ei.value).startswith(f"m.fsa:{line}: ")
    assert fragment in str(ei.value)


@pytest.mark.parametrize("text", [
    "marked: *\n",
    "states:\n",
    "states: s\ninitial: t\n",
    "states: s\nmarked: t\n",
    "alphabet: a\nstates: s\ntransitions:\ns b s\n",
])
def test_file_level_errors(text):
    with pytest.raises(ParseError):
        parse_model(text)


def test_round_trip_fixture():
    for key in ("plant", "sup", "attacker"):
        a = load_model(water_tank_files()[key])
        b = parse_model(render_model(a))
        assert isomorphic(a, b) and b.name == a.name
        assert render_model(b) == render_model(a)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_random(seed):
    rng = random.Random(seed)
    labels = plain("a", "b", "c") + [EventLabel.attacked("a"),
                                     EventLabel.command(["a", "c"])]
    a = random_dfa(rng, rng.randint(1, 6), labels)
    b = parse_model(render_model(a))
    assert b.state_names == a.state_names
    assert b.alphabet == a.alphabet
    assert b.marked == a.marked
    assert b.transitions() == a.transitions()


def test_round_trip_random_attacker():
    rng = random.Random(5)
    for _ in range(20):
        al = random_alphabet(rng)
        a = random_attacker(rng, al, rng.randint(1, 6))
        assert parse_model(render_model(a)).transitions() == a.transitions()


class TestAlphabet:
    def test_fixture(self):
        al = parse_alphabet(water_tank_files()["alphabet"].read_text())
        assert al.sigma == {"L", "H", "EH", "open", "close"}
        assert al.sigma_c == {"open", "close"}
        assert al.sigma_sa == {"L", "H", "EH"}
        assert parse_alphabet(render_alphabet(al)) == al

    def test_chain_violation(self):
        text = ("events: a b\ncontrollable: a\nobservable: a\n"
                "attacker-observable: a\ncompromised: b\n")
        with pytest.raises(ParseError):
            parse_alphabet(text)

    def test_missing_key(self):
        with pytest.raises(ParseError, match="compromised"):
            parse_alphabet("events: a\ncontrollable:\nobservable: a\nattacker-observable: a\n")

    def test_bad_name(self):
        with pytest.raises(ParseError) as ei:
            parse_alphabet("events: a b#\n")
        assert ei.value.line == 1

    def test_parse_error_is_value_error(self):
        assert issubclass(ParseError, ValueError)
        assert issubclass(InvalidArgument, ValueError)
