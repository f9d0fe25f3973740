"""RPQ semantics as set-valued queries, plus walk-membership deciders.

``MM`` keeps the matches whose edge multiset is minimal for strict inclusion;
``SMS`` keeps the matches minimal for edge-set inclusion with length as the
tie-breaker. Both are computed from the product-simple candidates of
:mod:`walkmin.engine`.
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Callable, Iterator

from .engine import (
    Product,
    SearchStats,
    as_nfa,
    edge_bits,
    enumerate_matches,
    enumerate_trail_matches,
    iter_product_simple,
    shortest_matches,
    unwind,
)
from .graph import Graph, Walk, WalkError, bag_le, edge_bag, edge_set, validate_walk
from .regex import Nfa, RegExp, accepts

__all__ = [
    "iter_minimal",
    "mm_set",
    "sms_set",
    "mm_all",
    "sms_all",
    "trail_set",
    "shortest_set",
    "match_set",
    "mm_dominator",
    "sms_dominator",
    "mm_membership",
    "sms_membership",
    "SEMANTICS",
]

SEMANTICS = ("match", "trail", "shortest", "mm", "sms")


def iter_minimal(g: Graph, r: RegExp | Nfa, s: str, t: str, order: str = "mm",
                 stats: SearchStats | None = None,
                 on_output: Callable[[Walk, SearchStats], None] | None = None) -> Iterator[Walk]:
    """Yield the minimal matches from ``s`` to ``t`` in (length, steps) order.

    ``order`` is ``"mm"`` (edge bags) or ``"sms"`` (edge sets, then length).

    Under ``"mm"`` a dominating walk is strictly shorter, so candidates taken
    by increasing length only need checking against the minimal walks already
    emitted (whatever dominates a candidate is itself dominated by an earlier
    minimal walk), and outputs stream as the search proceeds.

    Under ``"sms"`` a dominating walk can be longer (fewer distinct edges,
    more steps), so all candidates are gathered first and filtered in order
    of (edge-set size, length), in which every dominator comes first.
    """
    if order not in ("mm", "sms"):
        raise ValueError(f"unknown order {order!r}")
    stats = stats if stats is not None else SearchStats()
    if order == "sms":
        yield from _sms_filter(g, r, s, t, stats, on_output)
        return
    bits = edge_bits(g)
    # kept: (bag, edges used once, edges used twice, whether some edge is used 3+ times)
    kept: list[tuple[Counter, int, int, bool]] = []

    def dominated(masks: tuple[int, int], node, n: int) -> bool:
        # kept walks all come from shorter layers, so bag inclusion is strict
        once, twice = masks
        bag = None
        for m, m1, m2, deep in kept:
            if m1 & ~once or m2 & ~twice:
                continue
            stats.candidates += 1
            if not deep:
                return True
            if bag is None:
                bag = edge_bag(Walk(s, unwind(node)))
            if bag_le(m, bag):
                return True
        return False

    for layer in iter_product_simple(g, r, s, t, stats, prune=dominated):
        fresh = []
        for w in layer:
            bag = edge_bag(w)
            stats.candidates += len(kept)
            if not any(bag_le(m[0], bag) for m in kept):
                fresh.append((w, bag))
        for w, bag in fresh:
            m1 = _mask(bits, bag)
            m2 = _mask(bits, [e for e, c in bag.items() if c >= 2])
            kept.append((bag, m1, m2, max(bag.values(), default=0) >= 3))
            if on_output is not None:
                on_output(w, stats)
            yield w


def _mask(bits: dict, edges) -> int:
    out = 0
    for e in edges:
        out |= bits[e]
    return out


def _sms_filter(g, r, s, t, stats, on_output) -> Iterator[Walk]:
    bits = edge_bits(g)
    seen: list[tuple[int, int]] = []  # (edge mask, length) of every candidate so far

    def dominated(masks: tuple[int, int], node, n: int) -> bool:
        # a shorter match whose edges are all used by the prefix beats every extension
        once = masks[0]
        for m, k in seen:
            if k < n and not m & ~once:
                return True
        return False

    cands = []
    for layer in iter_product_simple(g, r, s, t, stats, prune=dominated):
        for w in layer:
            cands.append((edge_set(w), w))
            seen.append((_mask(bits, w.edges()), len(w)))
    cands.sort(key=lambda c: (len(c[0]), len(c[1]), c[1].sort_key))
    kept: list[tuple[frozenset, int]] = []
    out = []
    for es, w in cands:
        stats.candidates += len(kept)
        if any(m < es or (m == es and n < len(w)) for m, n in kept):
            continue
        kept.append((es, len(w)))
        out.append(w)
    out.sort(key=lambda w: w.sort_key)
    for w in out:
        if on_output is not None:
            on_output(w, stats)
        yield w


def mm_set(g: Graph, r: RegExp | Nfa, s: str, t: str) -> frozenset[Walk]:
    """``min_≺ Match(g, r, s, t)``."""
    return frozenset(iter_minimal(g, r, s, t, "mm"))


def sms_set(g: Graph, r: RegExp | Nfa, s: str, t: str) -> frozenset[Walk]:
    """``min_⊏ Match(g, r, s, t)``."""
    return frozenset(iter_minimal(g, r, s, t, "sms"))


def _all_pairs(g: Graph, r: RegExp | Nfa, order: str) -> frozenset[Walk]:
    nfa = as_nfa(r)
    out: set[Walk] = set()
    for s in sorted(g.vertices):
        for t in sorted(g.vertices):
            out.update(iter_minimal(g, nfa, s, t, order))
    return frozenset(out)


def mm_all(g: Graph, r: RegExp | Nfa) -> frozenset[Walk]:
    """Union of ``mm_set`` over every (source, target) pair."""
    return _all_pairs(g, r, "mm")


def sms_all(g: Graph, r: RegExp | Nfa) -> frozenset[Walk]:
    return _all_pairs(g, r, "sms")


def trail_set(g: Graph, r: RegExp | Nfa, s: str, t: str) -> frozenset[Walk]:
    return frozenset(enumerate_trail_matches(g, r, s, t))


def shortest_set(g: Graph, r: RegExp | Nfa, s: str, t: str) -> frozenset[Walk]:
    return frozenset(shortest_matches(g, r, s, t))


def match_set(g: Graph, r: RegExp | Nfa, s: str, t: str, max_len: int) -> frozenset[Walk]:
    return frozenset(enumerate_matches(g, r, s, t, max_len))


# -- membership --------------------------------------------------------------

def _check_walk(g: Graph, w: Walk) -> None:
    if not validate_walk(g, w):
        raise WalkError(f"walk is not in the graph: {w}")


def mm_dominator(g: Graph, r: RegExp | Nfa, w: Walk) -> Walk | None:
    """A shortest match ``w'`` with ``w' ≺ w``, or None when there is none.

    Breadth-first search over (vertex, automaton state, edges used so far),
    restricted to edge bags contained in that of ``w`` and to walks strictly
    shorter than ``w``. A used bag is packed into one integer whose ``i``-th
    block of bits holds the edges used more than ``i`` times, so bag inclusion
    is a single mask test. At one product state a bag containing an already
    reached bag is skipped: every completion of the larger one also completes
    the smaller one, no longer and within budget.
    """
    _check_walk(g, w)
    prod = Product(g, r, w.source, w.target)
    gd = prod.goal_dist
    bag = edge_bag(w)
    width = len(bag)
    pos = {e: i for i, e in enumerate(sorted(bag))}
    limit = len(w)

    if prod.start not in gd or gd[prod.start] >= limit:
        return None
    start = (prod.start, 0)
    parent: dict = {start: None}
    reached: dict = {prod.start: [0]}
    queue = deque([(start, 0)])
    while queue:
        node, n = queue.popleft()
        state, used = node
        if prod.is_goal(state):
            return _rebuild(parent, node, w.source)
        for a, u, q in prod.succ(state):
            e = (state[0], a, u)
            p = pos.get(e)
            if p is None:
                continue
            child = (u, q)
            d = gd.get(child)
            if d is None or n + 1 + d >= limit:
                continue
            for i in range(bag[e]):
                b = 1 << (i * width + p)
                if not used & b:
                    break
            else:
                continue
            grown = used | b
            seen = reached.setdefault(child, [])
            miss = ~grown
            if any(not old & miss for old in seen):
                continue
            seen.append(grown)
            key = (child, grown)
            parent[key] = (node, a)
            queue.append((key, n + 1))
    return None


def sms_dominator(g: Graph, r: RegExp | Nfa, w: Walk) -> Walk | None:
    """A match ``w'`` with ``w' ⊏ w``, or None.

    Search states are (vertex, automaton state, set of edges used), explored
    breadth-first so each state is first met at its shortest length.
    """
    _check_walk(g, w)
    prod = Product(g, r, w.source, w.target)
    gd = prod.goal_dist
    es = sorted(edge_set(w))
    slot = {e: i for i, e in enumerate(es)}
    full = (1 << len(es)) - 1
    limit = len(w)

    if prod.start not in gd:
        return None
    start = (prod.start, 0)
    parent: dict = {start: None}
    queue = deque([(start, 0)])
    while queue:
        node, n = queue.popleft()
        state, mask = node
        if prod.is_goal(state) and (mask != full or n < limit):
            return _rebuild(parent, node, w.source)
        for a, u, q in prod.succ(state):
            i = slot.get((state[0], a, u))
            if i is None:
                continue
            child = (u, q)
            if child not in gd:
                continue
            key = (child, mask | (1 << i))
            if key not in parent:
                parent[key] = (node, a)
                queue.append((key, n + 1))
    return None


def _rebuild(parent: dict, node, source: str) -> Walk:
    steps = []
    while parent[node] is not None:
        prev, a = parent[node]
        steps.append((a, node[0][0]))
        node = prev
    steps.reverse()
    return Walk(source, tuple(steps))


def mm_membership(g: Graph, r: RegExp | Nfa, w: Walk) -> bool:
    """Whether ``w`` belongs to ``MM(g, r, src(w), tgt(w))``."""
    _check_walk(g, w)
    if not accepts(as_nfa(r), w.word):
        return False
    return mm_dominator(g, r, w) is None


def sms_membership(g: Graph, r: RegExp | Nfa, w: Walk) -> bool:
    """Whether ``w`` belongs to ``SMS(g, r, src(w), tgt(w))``."""
    _check_walk(g, w)
    if not accepts(as_nfa(r), w.word):
        return False
    return sms_dominator(g, r, w) is None
