"""Seeded random graphs, expressions and walks for the property and oracle tests."""

from __future__ import annotations

import random

from walkmin.graph import Graph, Walk
from walkmin.regex import Atom, Concat, Epsilon, Star, Union


def random_graph(rng: random.Random, max_vertices: int = 4, max_labels: int = 3,
                 max_edges: int = 8, full: bool = False) -> Graph:
    """A random graph within the bounds; ``full`` uses every bound exactly."""
    vs = [f"v{i}" for i in range(max_vertices if full else rng.randint(1, max_vertices))]
    ls = "abc"[:max_labels if full else rng.randint(1, max_labels)]
    universe = [(s, a, t) for s in vs for a in ls for t in vs]
    n_edges = max_edges if full else rng.randint(0, max_edges)
    edges = rng.sample(universe, min(len(universe), n_edges))
    return Graph(frozenset(vs), frozenset(ls), frozenset(edges))


def random_regex(rng: random.Random, n_atoms: int, labels: str = "abc"):
    """An expression with exactly ``n_atoms`` atoms (``n_atoms`` >= 1)."""
    if n_atoms == 1:
        node = Atom(rng.choice(labels))
        return Star(node) if rng.random() < 0.2 else node
    left = rng.randint(1, n_atoms - 1)
    a = random_regex(rng, left, labels)
    b = random_regex(rng, n_atoms - left, labels)
    node = Concat(a, b) if rng.random() < 0.55 else Union(a, b)
    roll = rng.random()
    if roll < 0.15:
        node = Star(node)
    elif roll < 0.2:
        node = Union(node, Epsilon())
    return node


def random_walk(rng: random.Random, g: Graph, max_len: int) -> Walk:
    """A uniform-step random walk in ``g`` of length at most ``max_len``."""
    start = v = rng.choice(sorted(g.vertices))
    steps = []
    for _ in range(rng.randint(0, max_len)):
        out = g.out_edges[v]
        if not out:
            break
        a, v = rng.choice(out)
        steps.append((a, v))
    return Walk(start, tuple(steps))
