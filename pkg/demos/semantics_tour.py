"""
Five ways to answer one path query
==================================

A small graph, one expression, and the answer under each semantics.
"""

from walkmin import Graph, parse
from walkmin.engine import enumerate_matches, enumerate_trail_matches, shortest_matches
from walkmin.semantics import mm_set, sms_set

# a loop on s and a detour through m, both ending in t
g = Graph.from_edges([
    ("s", "a", "s"), ("s", "b", "t"),
    ("s", "a", "m"), ("m", "b", "t"),
])
r = parse("a*b")

# every match up to length 3 (there are infinitely many)
print("match, length <= 3:")
for w in enumerate_matches(g, r, "s", "t", 3):
    print("  ", w)

# trails never repeat an edge, shortest keeps only the minimum length
print("trail:", [str(w) for w in enumerate_trail_matches(g, r, "s", "t")])
print("shortest:", [str(w) for w in shortest_matches(g, r, "s", "t")])

# minimal multisets of edges: going round the loop only adds edges, so it is
# dropped, while the detour uses different edges and survives
print("mm:", sorted(str(w) for w in mm_set(g, r, "s", "t")))
print("sms:", sorted(str(w) for w in sms_set(g, r, "s", "t")))
