import random

import pytest

from walkmin.engine import (
    Product,
    SearchStats,
    UnknownVertexError,
    enumerate_matches,
    enumerate_product_simple,
    enumerate_trail_matches,
    iter_product_simple,
    nonempty,
    shortest_matches,
)
from walkmin.graph import Graph, Walk, bag_lt, edge_bag, edge_set, is_trail, validate_walk
from walkmin.reduction import build_enum_instance, make_instance
from walkmin.regex import Epsilon, accepts, parse, to_nfa

from gen import random_graph, random_regex
from oracles import all_matches, derivative_accepts

LOOP_A = Graph.from_edges([("v", "a", "v")])
TOY = Graph.from_edges([("s", "a", "s"), ("s", "b", "t")])
DIAMOND = Graph.from_edges([("s", "a", "t"), ("s", "b", "m"), ("m", "c", "t")])


def W(src, *steps):
    return Walk(src, tuple(steps))


def test_nonempty_examples():
    assert nonempty(Graph.from_edges([("s", "a", "t")]), parse("a"), "s", "t")
    empty = Graph(frozenset({"s", "t"}), frozenset({"a"}), frozenset())
    assert not nonempty(empty, parse("a"), "s", "t")
    ri = build_enum_instance(make_instance(3, [[1, 2, 3]]))
    assert nonempty(ri.graph, ri.r, ri.source, ri.target)


def test_unknown_vertex():
    with pytest.raises(UnknownVertexError):
        nonempty(TOY, parse("a"), "s", "nowhere")
    with pytest.raises(KeyError):
        shortest_matches(TOY, parse("a"), "nowhere", "s")


def test_shortest_examples():
    assert shortest_matches(DIAMOND, parse("a+bc"), "s", "t") == [W("s", ("a", "t"))]
    assert shortest_matches(LOOP_A, parse("aa"), "v", "v") == [W("v", ("a", "v"), ("a", "v"))]
    assert shortest_matches(DIAMOND, parse("c"), "s", "t") == []


def test_shortest_returns_all_ties():
    g = Graph.from_edges([("s", "a", "x"), ("s", "a", "y"), ("x", "b", "t"), ("y", "b", "t")])
    assert shortest_matches(g, parse("ab"), "s", "t") == [
        W("s", ("a", "x"), ("b", "t")), W("s", ("a", "y"), ("b", "t"))]


def test_enumerate_matches_examples():
    got = enumerate_matches(LOOP_A, parse("a*"), "v", "v", 2)
    assert got == [W("v"), W("v", ("a", "v")), W("v", ("a", "v"), ("a", "v"))]
    assert enumerate_matches(TOY, Epsilon(), "s", "s", 0) == [W("s")]
    assert enumerate_matches(Graph.from_edges([("s", "a", "t")]), parse("b"), "s", "t", 5) == []
    with pytest.raises(ValueError):
        enumerate_matches(TOY, parse("a"), "s", "s", -1)


def test_product_simple_examples():
    got = enumerate_product_simple(LOOP_A, parse("a*"), "v", "v")
    assert W("v") in got
    toy = enumerate_product_simple(TOY, parse("aab+b"), "s", "t")
    assert toy == [W("s", ("b", "t")), W("s", ("a", "s"), ("a", "s"), ("b", "t"))]


def test_trail_examples():
    assert enumerate_trail_matches(LOOP_A, parse("aa"), "v", "v") == []
    g = Graph.from_edges([("s", "a", "t")])
    assert enumerate_trail_matches(g, parse("a"), "s", "t") == [W("s", ("a", "t"))]


def test_trail_callback_sees_every_trail():
    seen = []
    g = Graph.from_edges([("v", "a", "v"), ("v", "b", "v")])
    out = enumerate_trail_matches(g, parse("(a+b)*"), "v", "v", on_match=seen.append)
    assert sorted(seen, key=lambda w: w.sort_key) == out
    assert all(is_trail(w) for w in out)
    assert len(out) == 5  # ε, a, b, ab, ba


def test_stats_are_counted():
    stats = SearchStats()
    enumerate_product_simple(TOY, parse("aab+b"), "s", "t", stats)
    assert stats.expansions > 0 and stats.candidates == 2


def _instances(seed, n):
    rng = random.Random(seed)
    for _ in range(n):
        g = random_graph(rng)
        r = random_regex(rng, rng.randint(1, 5))
        vs = sorted(g.vertices)
        yield g, r, rng.choice(vs), rng.choice(vs)


def test_enumerate_matches_against_plain_dfs():
    for g, r, s, t in _instances(1, 300):
        got = [w.steps for w in enumerate_matches(g, r, s, t, 6)]
        assert got == all_matches(g, r, s, t, 6)


def test_product_simple_within_bounded_matches():
    literal = 0
    for g, r, s, t in _instances(2, 300):
        bound = len(g.vertices) * to_nfa(r).n_states - 1
        simple = enumerate_product_simple(g, r, s, t)
        assert len(set(simple)) == len(simple)
        # membership in Match(g, r, s, t) restricted to length <= bound
        for w in simple:
            assert len(w) <= bound and validate_walk(g, w)
            assert w.source == s and w.target == t and derivative_accepts(r, w.word)
        if bound <= 9:
            literal += 1
            assert set(simple) <= set(enumerate_matches(g, r, s, t, bound))
        assert set(shortest_matches(g, r, s, t)) <= set(simple)
    assert literal > 50


def test_layers_come_in_increasing_length():
    for g, r, s, t in _instances(3, 100):
        lengths = [len(layer[0]) for layer in iter_product_simple(g, r, s, t)]
        assert lengths == sorted(set(lengths))


def test_deterministic_output():
    for g, r, s, t in _instances(4, 50):
        assert enumerate_product_simple(g, r, s, t) == enumerate_product_simple(g, r, s, t)
        assert enumerate_matches(g, r, s, t, 5) == enumerate_matches(g, r, s, t, 5)


def _runs(nfa, word):
    """Every accepting state sequence of ``nfa`` on ``word``."""
    out = []

    def go(i, q, path):
        if i == len(word):
            if q in nfa.finals:
                out.append(path)
            return
        for q2 in nfa.delta.get((q, word[i]), ()):
            go(i + 1, q2, path + [q2])

    go(0, nfa.initial, [nfa.initial])
    return out


def test_pruning_lemma_by_excision():
    # cut the segment between two visits of one product state and compare
    checked = 0
    for g, r, s, t in _instances(5, 200):
        nfa = to_nfa(r)
        for w in enumerate_matches(g, r, s, t, 6):
            for run in _runs(nfa, w.word):
                states = list(zip(w.vertices, run))
                first = {}
                for j, st in enumerate(states):
                    if st in first:
                        i = first[st]
                        cut = Walk(s, w.steps[:i] + w.steps[j:])
                        assert accepts(nfa, cut.word)
                        assert bag_lt(cut, w)
                        assert edge_set(cut) <= edge_set(w) and len(cut) < len(w)
                        checked += 1
                        break
                    first[st] = j
    assert checked > 50


def test_product_size_bound():
    ri = build_enum_instance(make_instance(3, [[1, -2, 3]]))
    prod = Product(ri.graph, ri.r, ri.source, ri.target)
    assert len(prod.goal_dist) <= prod.n_states
    assert edge_bag(W("s")) == {}
