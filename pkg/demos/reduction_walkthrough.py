"""
From a 3-CNF formula to a hard enumeration instance
===================================================

Build the gadget graph for a formula, look at the easy answers, and see the
satisfying assignment appear as the first hard answer.
"""

from walkmin.engine import enumerate_trail_matches
from walkmin.reduction import build_enum_instance, make_instance, sat_oracle, valuation_of
from walkmin.regex import accepts, to_nfa
from walkmin.semantics import mm_set
from walkmin.verify import check_all

inst = make_instance(3, [[1, 2, 3], [-1, -2, -3]])
ri = build_enum_instance(inst)
print(f"k={ri.k} l={ri.l} |V|={len(ri.graph.vertices)} |E|={len(ri.graph.edges)}")
print("R =", ri.manifest()["R"])

# the easy answers repeat one edge of a variable gadget: 2*l*k of them
mm = mm_set(ri.graph, ri.r, ri.source, ri.target)
r2 = to_nfa(ri.r2)
easy = [w for w in mm if accepts(r2, w.word)]
print(f"{len(mm)} minimal walks, {len(easy)} easy")

# every further answer is an R1 trail followed by the fixed R3 walk, and each
# such trail encodes a satisfying valuation
trails = enumerate_trail_matches(ri.graph, ri.r1, ri.source, ri.target)
print("satisfiable:", sat_oracle(inst), "trails:", len(trails))
print("first valuation:", valuation_of(ri, trails[0]))

# all construction checks on this formula
print(check_all(inst).to_text(timing=False))
