"""
Where the enumeration spends its time
=====================================

Work counted between consecutive outputs of the minimal-multiset enumeration
on a gadget graph. The easy answers come quickly; the gap before the next
answer is where satisfiability gets decided.
"""

from walkmin.reduction import make_instance
from walkmin.verify import delay_profile

for clauses in ([[1, 2, 3]], [[1, 2, 3], [-1, -2, 3], [1, -2, -3]]):
    inst = make_instance(3, clauses)
    prof = delay_profile(inst)
    gaps = prof.gaps
    e = prof.easy_count
    print(f"l={inst.l}: {len(prof.entries)} outputs, {prof.total_steps} steps")
    print("   largest gap among easy outputs:", max(gaps[:e]))
    print("   gap after output", e, ":", prof.gap_after_easy)
