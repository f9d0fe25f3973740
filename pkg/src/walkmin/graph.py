"""Labeled directed graphs, walks, and the bag / set orders on walks."""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

__all__ = [
    "Edge",
    "Graph",
    "Walk",
    "GraphError",
    "WalkError",
    "COLORS",
    "validate_walk",
    "concat",
    "edge_bag",
    "edge_set",
    "red_edge_bag",
    "is_trail",
    "bag_le",
    "bag_lt",
    "set_lt",
    "graph_to_json",
    "graph_from_json",
    "walk_to_json",
    "walk_from_json",
    "load_graph",
    "load_walk",
    "to_dot",
]

Edge = tuple[str, str, str]  # (src, label, tgt)

COLORS = ("red", "blue", "green")


class GraphError(ValueError):
    pass


class WalkError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """``G = (V, L, E)`` with ``E`` a set of (src, label, tgt) triples."""

    vertices: frozenset[str]
    labels: frozenset[str]
    edges: frozenset[Edge]

    def __post_init__(self):
        for s, a, t in self.edges:
            if s not in self.vertices or t not in self.vertices:
                raise GraphError(f"edge {s} -{a}-> {t} has an undeclared endpoint")
            if a not in self.labels:
                raise GraphError(f"edge {s} -{a}-> {t} has an undeclared label")

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], vertices: Iterable[str] = (),
                   labels: Iterable[str] = ()) -> Graph:
        """Build a graph, declaring every endpoint and label that ``edges`` mention."""
        edges = frozenset((str(s), str(a), str(t)) for s, a, t in edges)
        vs = set(vertices) | {s for s, _, _ in edges} | {t for _, _, t in edges}
        ls = set(labels) | {a for _, a, _ in edges}
        return cls(frozenset(vs), frozenset(ls), edges)

    @cached_property
    def out_edges(self) -> dict[str, tuple[tuple[str, str], ...]]:
        """vertex -> sorted (label, tgt) pairs."""
        table: dict[str, list[tuple[str, str]]] = defaultdict(list)
        for s, a, t in self.edges:
            table[s].append((a, t))
        return {v: tuple(sorted(table.get(v, ()))) for v in self.vertices}

    @cached_property
    def in_edges(self) -> dict[str, tuple[tuple[str, str], ...]]:
        """vertex -> sorted (src, label) pairs."""
        table: dict[str, list[tuple[str, str]]] = defaultdict(list)
        for s, a, t in self.edges:
            table[t].append((s, a))
        return {v: tuple(sorted(table.get(v, ()))) for v in self.vertices}

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self.vertices)}, |L|={len(self.labels)}, |E|={len(self.edges)})"


@dataclass(frozen=True, order=True)
class Walk:
    """``v0 -a1-> v1 ... -ak-> vk`` stored as a source and (label, vertex) steps."""

    source: str
    steps: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not isinstance(self.steps, tuple):
            object.__setattr__(self, "steps", tuple((a, v) for a, v in self.steps))

    @classmethod
    def from_edges(cls, edges: Iterable[Edge]) -> Walk:
        edges = list(edges)
        if not edges:
            raise WalkError("cannot infer the source of an empty edge sequence")
        steps = []
        cur = edges[0][0]
        for s, a, t in edges:
            if s != cur:
                raise WalkError(f"edge {s} -{a}-> {t} does not continue from {cur}")
            steps.append((a, t))
            cur = t
        return cls(edges[0][0], tuple(steps))

    @property
    def target(self) -> str:
        return self.steps[-1][1] if self.steps else self.source

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def word(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.steps)

    @property
    def vertices(self) -> tuple[str, ...]:
        return (self.source,) + tuple(v for _, v in self.steps)

    def edges(self) -> list[Edge]:
        out = []
        prev = self.source
        for a, v in self.steps:
            out.append((prev, a, v))
            prev = v
        return out

    @property
    def sort_key(self) -> tuple:
        """Deterministic output order: by length, then by step encoding."""
        return (len(self.steps), self.source, self.steps)

    def __str__(self) -> str:
        return self.source + "".join(f" -{a}-> {v}" for a, v in self.steps)


def validate_walk(g: Graph, w: Walk) -> bool:
    if w.source not in g.vertices:
        return False
    return all(e in g.edges for e in w.edges())


def concat(w1: Walk, w2: Walk) -> Walk:
    if w1.target != w2.source:
        raise WalkError(f"cannot concatenate: {w1.target!r} != {w2.source!r}")
    return Walk(w1.source, w1.steps + w2.steps)


def edge_bag(w: Walk) -> Counter:
    return Counter(w.edges())


def edge_set(w: Walk) -> frozenset[Edge]:
    return frozenset(w.edges())


def red_edge_bag(w: Walk, color_of: Mapping[str, str]) -> Counter:
    bag: Counter = Counter()
    for e in w.edges():
        try:
            color = color_of[e[1]]
        except KeyError:
            raise KeyError(f"no color assigned to label {e[1]!r}") from None
        if color == "red":
            bag[e] += 1
    return bag


def is_trail(w: Walk) -> bool:
    edges = w.edges()
    return len(set(edges)) == len(edges)


def bag_le(small: Mapping, big: Mapping) -> bool:
    """Sub-multiset test on Counter-like mappings."""
    return all(big.get(e, 0) >= c for e, c in small.items())


def bag_lt(w1: Walk, w2: Walk) -> bool:
    """``w1 ≺ w2``: the edge bag of ``w1`` is a strict sub-multiset of that of ``w2``."""
    return len(w1) < len(w2) and bag_le(edge_bag(w1), edge_bag(w2))


def set_lt(w1: Walk, w2: Walk) -> bool:
    """``w1 ⊏ w2``: strict edge-set inclusion, or equal edge sets and ``w1`` shorter."""
    s1, s2 = edge_set(w1), edge_set(w2)
    return s1 < s2 or (s1 == s2 and len(w1) < len(w2))


# -- file formats ------------------------------------------------------------

def graph_to_json(g: Graph, colors: Mapping[str, str] | None = None) -> dict:
    doc = {
        "vertices": sorted(g.vertices),
        "labels": sorted(g.labels),
        "edges": [{"src": s, "label": a, "tgt": t} for s, a, t in sorted(g.edges)],
    }
    if colors is not None:
        doc["colors"] = {a: colors[a] for a in sorted(colors)}
    return doc


def graph_from_json(doc: Mapping) -> tuple[Graph, dict[str, str] | None]:
    """Parse the JSON graph document; returns the graph and its optional color map."""
    try:
        vertices = frozenset(str(v) for v in doc["vertices"])
        labels = frozenset(str(a) for a in doc["labels"])
        edges = frozenset((str(e["src"]), str(e["label"]), str(e["tgt"])) for e in doc["edges"])
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph document: {exc!r}") from None
    g = Graph(vertices, labels, edges)
    colors = doc.get("colors")
    if colors is not None:
        colors = {str(a): str(c) for a, c in colors.items()}
        bad = {c for c in colors.values() if c not in COLORS}
        if bad:
            raise GraphError(f"unknown colors {sorted(bad)}")
    return g, colors


def walk_to_json(w: Walk) -> dict:
    return {"source": w.source, "steps": [{"label": a, "tgt": v} for a, v in w.steps]}


def walk_from_json(doc: Mapping) -> Walk:
    try:
        return Walk(str(doc["source"]), tuple((str(s["label"]), str(s["tgt"])) for s in doc["steps"]))
    except (KeyError, TypeError) as exc:
        raise WalkError(f"malformed walk document: {exc!r}") from None


def load_graph(path) -> tuple[Graph, dict[str, str] | None]:
    with open(path, encoding="utf-8") as fh:
        return graph_from_json(json.load(fh))


def load_walk(path) -> Walk:
    with open(path, encoding="utf-8") as fh:
        return walk_from_json(json.load(fh))


def _dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph, colors: Mapping[str, str] | None = None, name: str = "G",
           highlight: Iterable[Edge] = ()) -> str:
    """DOT text for ``g``; edges in ``highlight`` are drawn bold."""
    bold = set(highlight)
    lines = [f"digraph {_dot_id(name)} {{"]
    for v in sorted(g.vertices):
        lines.append(f"  {_dot_id(v)};")
    for s, a, t in sorted(g.edges):
        attrs = [f"label={_dot_id(a)}"]
        if colors and a in colors:
            attrs.append(f"color={_dot_id(colors[a])}")
        if (s, a, t) in bold:
            attrs.append("penwidth=3")
        lines.append(f"  {_dot_id(s)} -> {_dot_id(t)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
