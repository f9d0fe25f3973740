"""
Rejecting a walk with a certificate
===================================

A walk is outside the minimal-multiset answer exactly when some other match
uses a strictly smaller bag of edges; that match is the certificate.
"""

from walkmin import Graph, Walk, parse
from walkmin.semantics import mm_dominator, mm_membership, sms_dominator, sms_membership

g = Graph.from_edges([("s", "a", "s"), ("s", "b", "t")])
r = parse("aab+b")

# s -a-> s -a-> s -b-> t matches, but s -b-> t uses a sub-bag of its edges
aab = Walk("s", (("a", "s"), ("a", "s"), ("b", "t")))
print(aab, "member:", mm_membership(g, r, aab))
print("certificate:", mm_dominator(g, r, aab))

# under set-then-length order a dominator can be longer than the walk it beats
h = Graph.from_edges([("v0", "a", "v0"), ("v0", "a", "v1"), ("v1", "a", "v0"), ("v1", "a", "v1")])
looped = Walk("v0", (("a", "v1"), ("a", "v1"), ("a", "v0")))
cert = sms_dominator(h, parse("aaa(a)*"), looped)
print(looped, "sms member:", sms_membership(h, parse("aaa(a)*"), looped))
print("certificate:", cert, f"(length {len(cert)} > {len(looped)})")
