"""Product-automaton search: reachability, shortest matches and walk enumeration.

A product state is a pair ``(vertex, nfa_state)``. Every search here runs over
the product of a :class:`~walkmin.graph.Graph` with the ε-free Glushkov
automaton of the query, so each product move consumes exactly one edge.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field

from .graph import Graph, GraphError, Walk
from .regex import Nfa, RegExp, to_nfa

__all__ = [
    "ProductState",
    "Product",
    "SearchStats",
    "UnknownVertexError",
    "as_nfa",
    "nonempty",
    "shortest_matches",
    "enumerate_matches",
    "iter_product_simple",
    "enumerate_product_simple",
    "enumerate_trail_matches",
    "edge_bits",
    "unwind",
]

ProductState = tuple[str, int]


class UnknownVertexError(GraphError, KeyError):
    pass


@dataclass
class SearchStats:
    """Machine-independent work counters, updated in place by the searches."""

    expansions: int = 0
    candidates: int = 0
    extra: dict = field(default_factory=dict)


def as_nfa(r: RegExp | Nfa) -> Nfa:
    return r if isinstance(r, Nfa) else to_nfa(r)


def _check_vertices(g: Graph, *vs: str) -> None:
    for v in vs:
        if v not in g.vertices:
            raise UnknownVertexError(f"unknown vertex {v!r}")


class Product:
    """Lazy product ``G × A`` for a fixed source/target pair."""

    def __init__(self, g: Graph, r: RegExp | Nfa, s: str, t: str):
        _check_vertices(g, s, t)
        self.g = g
        self.nfa = as_nfa(r)
        self.s = s
        self.t = t
        self.start: ProductState = (s, self.nfa.initial)
        self._succ: dict[ProductState, tuple[tuple[str, str, int], ...]] = {}
        self._goal_dist: dict[ProductState, int] | None = None

    def is_goal(self, state: ProductState) -> bool:
        return state[0] == self.t and state[1] in self.nfa.finals

    def succ(self, state: ProductState) -> tuple[tuple[str, str, int], ...]:
        """Sorted (label, vertex, nfa_state) moves out of ``state``."""
        cached = self._succ.get(state)
        if cached is None:
            v, q = state
            delta = self.nfa.delta
            cached = tuple(
                (a, u, q2)
                for a, u in self.g.out_edges[v]
                for q2 in delta.get((q, a), ())
            )
            self._succ[state] = cached
        return cached

    @property
    def goal_dist(self) -> dict[ProductState, int]:
        """Distance from each co-reachable product state to an accepting one."""
        if self._goal_dist is None:
            rdelta: dict[tuple[int, str], list[int]] = {}
            for p, a, q in self.nfa.transitions:
                rdelta.setdefault((q, a), []).append(p)
            dist = {(self.t, f): 0 for f in self.nfa.finals}
            queue = deque(dist)
            while queue:
                v, q = queue.popleft()
                d = dist[v, q] + 1
                for u, a in self.g.in_edges[v]:
                    for p in rdelta.get((q, a), ()):
                        if (u, p) not in dist:
                            dist[u, p] = d
                            queue.append((u, p))
            self._goal_dist = dist
        return self._goal_dist

    @property
    def n_states(self) -> int:
        return len(self.g.vertices) * self.nfa.n_states


def nonempty(g: Graph, r: RegExp | Nfa, s: str, t: str) -> bool:
    """Whether some walk from ``s`` to ``t`` matches ``r``."""
    prod = Product(g, r, s, t)
    return prod.start in prod.goal_dist


def shortest_matches(g: Graph, r: RegExp | Nfa, s: str, t: str) -> list[Walk]:
    """All matches of minimum length, sorted.

    Breadth-first layers over product states; every product state keeps the set
    of its parents in the previous layer, and walks are read back from the
    accepting states of the first layer that has one.
    """
    prod = Product(g, r, s, t)
    dist = {prod.start: 0}
    parents: dict[ProductState, set[tuple[ProductState, str]]] = {prod.start: set()}
    layer = [prod.start]
    while layer:
        goals = [st for st in layer if prod.is_goal(st)]
        if goals:
            break
        nxt = []
        for st in layer:
            d = dist[st] + 1
            for a, u, q in prod.succ(st):
                child = (u, q)
                if child not in dist:
                    dist[child] = d
                    parents[child] = set()
                    nxt.append(child)
                if dist[child] == d:
                    parents[child].add((st, a))
        layer = nxt
    else:
        return []

    found: set[Walk] = set()
    # back-tracking from each goal: partial suffixes of steps in reverse
    stack = [(goal, ()) for goal in goals]
    while stack:
        st, suffix = stack.pop()
        if st == prod.start and dist[st] == 0:
            found.add(Walk(s, suffix))
            continue
        for parent, a in parents[st]:
            stack.append((parent, ((a, st[0]),) + suffix))
    return sorted(found, key=lambda w: w.sort_key)


def enumerate_matches(g: Graph, r: RegExp | Nfa, s: str, t: str, max_len: int,
                      stats: SearchStats | None = None) -> list[Walk]:
    """Every match from ``s`` to ``t`` of length at most ``max_len``.

    Walks are explored once each by tracking the set of automaton states reached
    (subset construction) instead of individual runs; prefixes that cannot reach
    an accepting product state in the remaining budget are cut.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    prod = Product(g, r, s, t)
    nfa = prod.nfa
    gd = prod.goal_dist
    out: list[Walk] = []

    def slack(v: str, states: frozenset[int]) -> int | None:
        ds = [gd[v, q] for q in states if (v, q) in gd]
        return min(ds) if ds else None

    start_states = frozenset((nfa.initial,))
    d0 = slack(s, start_states)
    if d0 is None or d0 > max_len:
        return out
    # stack of (vertex, nfa-state set, steps)
    stack: list[tuple[str, frozenset[int], tuple]] = [(s, start_states, ())]
    while stack:
        v, states, steps = stack.pop()
        if stats is not None:
            stats.expansions += 1
        if v == t and states & nfa.finals:
            out.append(Walk(s, steps))
        remaining = max_len - len(steps) - 1
        if remaining < 0:
            continue
        for a, u in g.out_edges[v]:
            nxt = nfa.step(states, a)
            if not nxt:
                continue
            d = slack(u, nxt)
            if d is not None and d <= remaining:
                stack.append((u, nxt, steps + ((a, u),)))
    out.sort(key=lambda w: w.sort_key)
    return out


# Pruning lemma for the product-simple search.
# Let w have an accepting run rho that visits product state (v, q) at steps i < j.
# The automaton has no ε-moves, so every product move consumes an edge and
# j - i >= 1. Cutting steps i+1..j out of (w, rho) gives a walk w' with an
# accepting run, src/tgt unchanged, EdgeBag(w') = EdgeBag(w) - EdgeBag(w[i..j])
# which is a strict sub-multiset, and EdgeSet(w') ⊆ EdgeSet(w) with
# len(w') < len(w). So w' ≺ w and w' ⊏ w: no ≺- or ⊏-minimal match needs a run
# that repeats a product state, and the search below may forbid repetitions.

def edge_bits(g: Graph) -> dict[tuple[str, str, str], int]:
    """One bit per edge, in sorted edge order."""
    return {e: 1 << i for i, e in enumerate(sorted(g.edges))}


def iter_product_simple(g: Graph, r: RegExp | Nfa, s: str, t: str,
                        stats: SearchStats | None = None,
                        prune: Callable[[tuple[int, int], object, int], bool] | None = None,
                        ) -> Iterator[list[Walk]]:
    """Yield, layer by layer in increasing length, the sorted product-simple matches.

    A product-simple match is a match with an accepting run that never repeats
    a product state. Layers are produced breadth-first, so a consumer sees all
    candidates of length ``n`` before any of length ``n + 1``.

    ``prune(masks, path, n)`` is consulted before a prefix of length ``n`` is
    expanded (after the consumer has handled every shorter layer); returning
    True drops the prefix and all its extensions. ``masks`` is a pair of
    :func:`edge_bits` masks: edges used at least once, and at least twice.
    ``path`` can be turned into steps with :func:`unwind`.
    """
    prod = Product(g, r, s, t)
    gd = prod.goal_dist
    if prod.start not in gd:
        return
    ebit = edge_bits(g)
    index: dict[ProductState, int] = {}

    def bit(state: ProductState) -> int:
        i = index.get(state)
        if i is None:
            i = index[state] = len(index)
        return 1 << i

    # frontier entries: (product state, visited mask, edge masks, path node)
    # path node is None for the empty walk, else (parent node, label, vertex)
    frontier = [(prod.start, bit(prod.start), (0, 0), None)]
    n = 0
    while frontier:
        layer: set[tuple] = set()
        nxt = []
        for state, mask, emasks, node in frontier:
            if prune is not None and prune(emasks, node, n):
                continue
            if stats is not None:
                stats.expansions += 1
            if prod.is_goal(state):
                layer.add(unwind(node))
            v = state[0]
            for a, u, q in prod.succ(state):
                child = (u, q)
                if child not in gd:
                    continue
                b = bit(child)
                if mask & b:
                    continue
                eb = ebit[v, a, u]
                once, twice = emasks
                if once & eb:
                    twice |= eb
                nxt.append((child, mask | b, (once | eb, twice), (node, a, u)))
        if layer:
            walks = sorted((Walk(s, steps) for steps in layer), key=lambda w: w.sort_key)
            if stats is not None:
                stats.candidates += len(walks)
            yield walks
        frontier = nxt
        n += 1


def unwind(node) -> tuple[tuple[str, str], ...]:
    steps = []
    while node is not None:
        node, a, v = node
        steps.append((a, v))
    steps.reverse()
    return tuple(steps)


def enumerate_product_simple(g: Graph, r: RegExp | Nfa, s: str, t: str,
                             stats: SearchStats | None = None) -> list[Walk]:
    """All product-simple matches, deduplicated, ordered by (length, steps).

    This is a finite superset of both the ≺-minimal and the ⊏-minimal matches.
    """
    return [w for layer in iter_product_simple(g, r, s, t, stats) for w in layer]


def enumerate_trail_matches(g: Graph, r: RegExp | Nfa, s: str, t: str,
                            stats: SearchStats | None = None,
                            on_match: Callable[[Walk], None] | None = None) -> list[Walk]:
    """All matches from ``s`` to ``t`` that repeat no edge, sorted."""
    prod = Product(g, r, s, t)
    nfa = prod.nfa
    gd = prod.goal_dist

    def alive(v: str, states: frozenset[int]) -> bool:
        return any((v, q) in gd for q in states)

    out: list[Walk] = []
    start_states = frozenset((nfa.initial,))
    if not alive(s, start_states):
        return out
    used: set[tuple[str, str, str]] = set()
    steps: list[tuple[str, str]] = []

    def dfs(v: str, states: frozenset[int]) -> None:
        if stats is not None:
            stats.expansions += 1
        if v == t and states & nfa.finals:
            w = Walk(s, tuple(steps))
            out.append(w)
            if on_match is not None:
                on_match(w)
        for a, u in g.out_edges[v]:
            e = (v, a, u)
            if e in used:
                continue
            nxt = nfa.step(states, a)
            if not nxt or not alive(u, nxt):
                continue
            used.add(e)
            steps.append((a, u))
            dfs(u, nxt)
            steps.pop()
            used.discard(e)

    dfs(s, start_states)
    out.sort(key=lambda w: w.sort_key)
    return out
