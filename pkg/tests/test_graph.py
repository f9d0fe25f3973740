import json
import random
import re
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkmin.graph import (
    Graph,
    GraphError,
    Walk,
    WalkError,
    bag_lt,
    concat,
    edge_bag,
    edge_set,
    graph_from_json,
    graph_to_json,
    is_trail,
    red_edge_bag,
    set_lt,
    to_dot,
    validate_walk,
    walk_from_json,
    walk_to_json,
)
from walkmin.reduction import Literal, build_enum_instance, canonical_r2_walk, make_instance

from gen import random_graph, random_walk

G1 = Graph.from_edges([("s", "a", "t")])
W_ABA = Walk("s", (("a", "t"), ("b", "s"), ("a", "t")))


def test_graph_rejects_undeclared_endpoints_and_labels():
    with pytest.raises(GraphError):
        Graph(frozenset({"s"}), frozenset({"a"}), frozenset({("s", "a", "t")}))
    with pytest.raises(GraphError):
        Graph(frozenset({"s", "t"}), frozenset({"b"}), frozenset({("s", "a", "t")}))


def test_parallel_edges_collapse():
    g = Graph.from_edges([("s", "a", "t"), ("s", "a", "t"), ("s", "b", "t")])
    assert len(g.edges) == 2


def test_validate_walk_examples():
    assert validate_walk(G1, Walk("s", (("a", "t"),)))
    assert not validate_walk(G1, Walk("s", (("b", "t"),)))
    assert validate_walk(G1, Walk("s"))
    assert not validate_walk(G1, Walk("zz"))


def test_walk_basics():
    assert len(W_ABA) == 3
    assert W_ABA.target == "t"
    assert W_ABA.word == ("a", "b", "a")
    assert W_ABA.vertices == ("s", "t", "s", "t")
    assert str(W_ABA) == "s -a-> t -b-> s -a-> t"
    assert Walk.from_edges(W_ABA.edges()) == W_ABA
    assert Walk("s").target == "s"
    with pytest.raises(WalkError):
        Walk.from_edges([("s", "a", "t"), ("s", "a", "t")])


def test_concat_examples():
    assert concat(Walk("s"), Walk("s", (("a", "t"),))) == Walk("s", (("a", "t"),))
    assert concat(Walk("s", (("a", "t"),)), Walk("t", (("b", "s"),))) == \
        Walk("s", (("a", "t"), ("b", "s")))
    with pytest.raises(WalkError):
        concat(Walk("s", (("a", "t"),)), Walk("s"))


def test_concat_across_target_in_gadget_graph():
    ri = build_enum_instance(make_instance(3, [[1, 2, 3]]))
    w2 = canonical_r2_walk(ri, Literal(1, True), 1)
    tail = Walk("Target", ())
    assert concat(w2, tail) == w2


def test_bags_and_sets():
    assert edge_bag(W_ABA) == Counter({("s", "a", "t"): 2, ("t", "b", "s"): 1})
    assert edge_set(W_ABA) == {("s", "a", "t"), ("t", "b", "s")}
    assert sum(edge_bag(W_ABA).values()) == len(W_ABA)


def test_red_edge_bag_filters_and_requires_colors():
    colors = {"a": "red", "b": "blue"}
    assert red_edge_bag(W_ABA, colors) == Counter({("s", "a", "t"): 2})
    with pytest.raises(KeyError):
        red_edge_bag(W_ABA, {"a": "red"})


def test_red_edge_bag_of_r2_walk_repeats_one_edge():
    ri = build_enum_instance(make_instance(3, [[1, 2, 3]]))
    alpha = Literal(2, False)
    for j in range(1, ri.l + 1):
        w = canonical_r2_walk(ri, alpha, j)
        bag = red_edge_bag(w, ri.colors)
        assert bag[(f"nx2^{j - 1}", "1", f"nx2^{j}")] == 2
        assert not is_trail(w)


def test_is_trail_examples():
    assert is_trail(Walk("s"))
    assert not is_trail(W_ABA)
    assert is_trail(Walk("s", (("a", "t"), ("b", "s"))))


def _bag_walk(spec):
    # walk whose bag is given as {label: count} over self-loops on one vertex
    steps = tuple((a, "v") for a, n in sorted(spec.items()) for _ in range(n))
    return Walk("v", steps)


def test_bag_lt_examples():
    e1, e2 = _bag_walk({"e": 1}), _bag_walk({"e": 2})
    assert bag_lt(e1, e2)
    x, y = _bag_walk({"e": 2}), _bag_walk({"e": 1, "f": 1})
    assert not bag_lt(x, y) and not bag_lt(y, x)
    assert not bag_lt(e1, e1)


def test_set_lt_examples():
    e, ef = _bag_walk({"e": 1}), _bag_walk({"e": 1, "f": 1})
    assert set_lt(e, ef)
    assert set_lt(_bag_walk({"e": 1}), _bag_walk({"e": 2}))
    assert not set_lt(_bag_walk({"e": 1, "f": 1}), _bag_walk({"f": 1, "e": 1}))


def _walk_triples(seed, n=300):
    rng = random.Random(seed)
    g = Graph.from_edges([("u", "a", "u"), ("u", "b", "v"), ("v", "a", "u"), ("v", "b", "v")])
    return [[random_walk(rng, g, 5) for _ in range(3)] for _ in range(n)]


@pytest.mark.parametrize("lt", [bag_lt, set_lt])
def test_orders_are_strict_partial_orders(lt):
    for a, b, c in _walk_triples(5):
        assert not lt(a, a)
        assert not (lt(a, b) and lt(b, a))
        if lt(a, b) and lt(b, c):
            assert lt(a, c)


def test_bag_order_implies_shorter():
    for a, b, _ in _walk_triples(6):
        if bag_lt(a, b):
            assert len(a) < len(b)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_concat_adds_bags(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 4, 2, 8)
    w1 = random_walk(rng, g, 5)
    # continue from the end of w1
    tail_start = w1.target
    steps, v = [], tail_start
    for _ in range(rng.randint(0, 5)):
        if not g.out_edges[v]:
            break
        a, v = rng.choice(g.out_edges[v])
        steps.append((a, v))
    w2 = Walk(tail_start, tuple(steps))
    w = concat(w1, w2)
    assert edge_bag(w) == edge_bag(w1) + edge_bag(w2)
    assert len(w) == len(w1) + len(w2)


def test_graph_json_round_trip():
    g = Graph.from_edges([("s", "a", "t"), ("t", "b", "s")])
    colors = {"a": "red", "b": "green"}
    doc = json.loads(json.dumps(graph_to_json(g, colors)))
    assert set(doc) == {"vertices", "labels", "edges", "colors"}
    assert doc["edges"][0] == {"src": "s", "label": "a", "tgt": "t"}
    g2, colors2 = graph_from_json(doc)
    assert g2 == g and colors2 == colors
    g3, colors3 = graph_from_json(graph_to_json(g))
    assert g3 == g and colors3 is None


def test_graph_json_errors():
    with pytest.raises(GraphError):
        graph_from_json({"vertices": ["s"]})
    with pytest.raises(GraphError):
        graph_from_json({"vertices": ["s"], "labels": ["a"], "edges": [],
                         "colors": {"a": "purple"}})


def test_walk_json_round_trip():
    doc = walk_to_json(W_ABA)
    assert doc == {"source": "s", "steps": [{"label": "a", "tgt": "t"}, {"label": "b", "tgt": "s"},
                                            {"label": "a", "tgt": "t"}]}
    assert walk_from_json(json.loads(json.dumps(doc))) == W_ABA
    with pytest.raises(WalkError):
        walk_from_json({"steps": []})


_DOT_ID = r'"(?:[^"\\]|\\.)*"'
_DOT_ATTR = rf"[a-z]+=(?:{_DOT_ID}|[0-9]+)"
_DOT_LINE = re.compile(rf"^  {_DOT_ID};$|^  {_DOT_ID} -> {_DOT_ID} \[{_DOT_ATTR}(?:, {_DOT_ATTR})*\];$")


def check_dot_syntax(text: str) -> None:
    """A strict check of the DOT subset the exporter emits."""
    lines = text.rstrip("\n").split("\n")
    assert re.fullmatch(rf"digraph {_DOT_ID} \{{", lines[0])
    assert lines[-1] == "}"
    for line in lines[1:-1]:
        assert _DOT_LINE.match(line), line


def test_dot_export_is_well_formed_and_colored():
    g = Graph.from_edges([("s", "4'", "t\"q"), ("t\"q", "b", "s")])
    text = to_dot(g, {"4'": "blue", "b": "red"}, highlight=[("s", "4'", 't"q')])
    check_dot_syntax(text)
    assert 'label="4\'", color="blue", penwidth=3' in text
    assert '"t\\"q"' in text


def test_dot_export_of_gadget_graph():
    ri = build_enum_instance(make_instance(3, [[1, -2, 3]]))
    text = to_dot(ri.graph, ri.colors)
    check_dot_syntax(text)
    assert text.count(" -> ") == len(ri.graph.edges)
