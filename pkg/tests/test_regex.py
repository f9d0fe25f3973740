import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkmin import reduction
from walkmin.regex import (
    Atom,
    Concat,
    Epsilon,
    RegexSyntaxError,
    Star,
    Union,
    accepts,
    alphabet,
    atoms,
    parse,
    star_height,
    to_nfa,
    to_string,
)

from gen import random_regex
from oracles import derivative_accepts


def test_parse_r1_expression():
    r = parse("0(1+2+313)*0")
    body = Union(Atom("1"), Union(Atom("2"), Concat(Atom("3"), Concat(Atom("1"), Atom("3")))))
    assert r == Concat(Atom("0"), Concat(Star(body), Atom("0")))


def test_parse_epsilon_and_primed_atom():
    assert parse("_") == Epsilon()
    assert parse("4'") == Atom("4'")
    assert parse("4''a") == Concat(Atom("4''"), Atom("a"))


def test_dots_and_whitespace_are_optional():
    assert parse("a . b c") == parse("abc")
    assert parse(" ( a + b ) * ") == Star(Union(Atom("a"), Atom("b")))


def test_star_is_postfix_and_repeatable():
    assert parse("a**") == Star(Star(Atom("a")))
    assert parse("ab*") == Concat(Atom("a"), Star(Atom("b")))


@pytest.mark.parametrize("text, pos", [("(a", 2), ("a)", 1), ("+a", 0), ("a+", 2), ("", 0),
                                       ("*", 0), ("()", 1), ("a#b", 1), ("'a", 0)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(RegexSyntaxError) as info:
        parse(text)
    assert info.value.pos == pos


def test_star_height_examples():
    assert star_height(Atom("a")) == 0
    assert star_height(parse("0(1+2+313)*0")) == 1
    assert star_height(Star(Star(Atom("a")))) == 2


def test_enumeration_expressions_have_star_height_one():
    texts = [reduction.R1_TEXT, reduction.R2_TEXT, reduction.R3_TEXT,
             reduction.R2_SMS_TEXT, reduction.R3_SMS_TEXT]
    for text in texts:
        assert star_height(parse(text)) == 1, text
    r = parse(reduction.R1_TEXT + reduction.R3_TEXT + "+" + reduction.R2_TEXT)
    assert star_height(r) == 1


def test_membership_expression_nests_stars():
    # 11*G11* sits inside the outer star; the hardness claim for membership
    # does not rely on star height
    assert star_height(parse(reduction.R2_MEMBERSHIP_TEXT)) == 2


def test_nfa_sizes():
    assert to_nfa(parse("ab+a")).n_states == 4
    n = to_nfa(Epsilon())
    assert n.n_states == 1 and n.initial in n.finals and not n.transitions


def test_star_accepts_unrolled():
    n = to_nfa(parse("a*"))
    for k in range(4):
        assert accepts(n, "a" * k)
    assert not accepts(n, "b")


def test_accepts_examples():
    n = to_nfa(parse("0(1+2+313)*0"))
    assert accepts(n, "00")
    assert accepts(n, "03130")
    assert not accepts(n, "030")


def test_accepts_takes_token_sequences():
    n = to_nfa(parse("4'1"))
    assert accepts(n, ("4'", "1"))
    assert not accepts(n, ("4", "1"))


def test_atoms_and_alphabet():
    r = parse("a(b+a)*c'")
    assert list(atoms(r)) == ["a", "b", "a", "c'"]
    assert alphabet(r) == {"a", "b", "c'"}


def _check_nfa_shape(r):
    n = to_nfa(r)
    assert n.n_states == len(atoms(r)) + 1
    for p, a, q in n.transitions:
        assert a  # no ε-moves: every transition reads a label
        assert 0 <= p < n.n_states and 0 <= q < n.n_states
    assert all(0 <= f < n.n_states for f in n.finals)


def test_thousand_random_pairs_against_derivatives():
    rng = random.Random(11)
    for _ in range(1000):
        r = random_regex(rng, rng.randint(1, 7))
        word = [rng.choice("abc") for _ in range(rng.randint(0, 8))]
        assert accepts(to_nfa(r), word) == derivative_accepts(r, word), (to_string(r), word)


regexes = st.recursive(
    st.one_of(st.sampled_from("abc").map(Atom), st.just(Epsilon())),
    lambda sub: st.one_of(
        sub.map(Star),
        st.tuples(sub, sub).map(lambda p: Concat(*p)),
        st.tuples(sub, sub).map(lambda p: Union(*p)),
    ),
    max_leaves=8,
)


@settings(max_examples=300, deadline=None)
@given(regexes, st.lists(st.sampled_from("abc"), max_size=8))
def test_accepts_matches_derivative_oracle(r, word):
    assert accepts(to_nfa(r), word) == derivative_accepts(r, word)


@settings(max_examples=300, deadline=None)
@given(regexes)
def test_print_parse_round_trip(r):
    assert parse(to_string(r)) == r


@settings(max_examples=300, deadline=None)
@given(regexes)
def test_nfa_is_epsilon_free_glushkov(r):
    _check_nfa_shape(r)
