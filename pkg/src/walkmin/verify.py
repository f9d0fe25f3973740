"""Executable checks of the hardness construction on concrete 3-CNF instances.

:func:`check_all` builds the three gadget graphs for one formula and runs
every combinatorial claim about them, recording measured against expected
values. :func:`delay_profile` streams the minimal-multiset answer and records
how much search work separates consecutive outputs.
"""

from __future__ import annotations

import json
import random
import time
from collections.abc import Callable, Iterable, Sequence
from dataclasses import asdict, dataclass, field

from .engine import Product, SearchStats, enumerate_matches, enumerate_trail_matches
from .graph import Walk, bag_le, concat, edge_bag, is_trail, red_edge_bag, set_lt
from .reduction import (
    InstanceTooLargeError,
    Literal,
    ReductionInstance,
    SatInstance,
    build_enum_instance,
    build_membership_instance,
    build_sms_instance,
    canonical_r2_walk,
    canonical_r3_walk,
    r1_clause_choices,
    r1_sides,
    random_instance,
    sat_oracle,
    satisfies,
    valuation_of,
)
from .regex import accepts, star_height, to_nfa
from .semantics import iter_minimal, mm_dominator, mm_membership, mm_set, sms_set

__all__ = [
    "CHECKS",
    "R1_LENGTH_OFFSET",
    "CheckResult",
    "VerificationReport",
    "DelayProfile",
    "check_all",
    "delay_profile",
    "profile_enumeration",
    "random_instances",
    "r1_length_formula",
]

CHECKS = (
    "r1_properties",
    "r2_census",
    "r3_unique",
    "trail_iff_sat",
    "red_inclusion",
    "equiv_three_way",
    "end_to_end",
    "membership_variant",
    "sms_variant",
)

# Measured R1-match length minus k·ℓ + 7k + 4ℓ + 3. The two glue hops
# start_nx{k} -> x0R and Lx{k+1} -> C0R account for it.
R1_LENGTH_OFFSET = 2

DEFAULT_MAX_K = 4
DEFAULT_MAX_L = 4


def r1_length_formula(k: int, l: int) -> int:  # noqa: E741
    return k * l + 7 * k + 4 * l + 3


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: dict
    expected: dict
    elapsed: float = 0.0


@dataclass
class VerificationReport:
    k: int
    l: int  # noqa: E741
    clauses: list[list[int]]
    checks: list[CheckResult] = field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self, timing: bool = True) -> dict:
        checks = []
        for c in self.checks:
            d = asdict(c)
            if not timing:
                d.pop("elapsed")
            checks.append(d)
        return {
            "instance": {"k": self.k, "l": self.l, "clauses": self.clauses,
                         "variants": ["enum", "membership", "sms"]},
            "seed": self.seed,
            "checks": checks,
            "verdict": "pass" if self.passed else "fail",
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> VerificationReport:
        inst = doc["instance"]
        checks = [CheckResult(c["name"], c["passed"], c["measured"], c["expected"],
                              c.get("elapsed", 0.0)) for c in doc["checks"]]
        return cls(inst["k"], inst["l"], inst["clauses"], checks, doc.get("seed"))

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        return cls.from_dict(json.loads(text))

    def to_text(self, timing: bool = True) -> str:
        head = f"instance k={self.k} l={self.l} clauses={self.clauses}"
        rows = [head, f"{'check':<20} {'result':<6} " + (f"{'time(s)':>8}  " if timing else "") + "measured"]
        for c in self.checks:
            shown = ", ".join(f"{key}={val}" for key, val in c.measured.items()
                              if not isinstance(val, (list, dict)))
            cell = f"{c.elapsed:>8.3f}  " if timing else ""
            rows.append(f"{c.name:<20} {'PASS' if c.passed else 'FAIL':<6} {cell}{shown}")
        rows.append(f"verdict: {'pass' if self.passed else 'fail'}")
        return "\n".join(rows) + "\n"


class _Context:
    """Graphs and enumerations shared by several checks, built on demand."""

    def __init__(self, inst: SatInstance):
        self.inst = inst
        self._cache: dict = {}

    def _get(self, key: str, make: Callable):
        if key not in self._cache:
            self._cache[key] = make()
        return self._cache[key]

    @property
    def sat(self) -> bool:
        return self._get("sat", lambda: sat_oracle(self.inst))

    @property
    def enum(self) -> ReductionInstance:
        return self._get("enum", lambda: build_enum_instance(self.inst))

    @property
    def membership(self) -> ReductionInstance:
        return self._get("membership", lambda: build_membership_instance(self.inst))

    @property
    def sms(self) -> ReductionInstance:
        return self._get("sms", lambda: build_sms_instance(self.inst))

    def bound(self, ri: ReductionInstance) -> int:
        return len(ri.graph.vertices) * to_nfa(ri.r).n_states

    def matches(self, variant: str, which: str) -> list[Walk]:
        def make():
            ri = getattr(self, variant)
            expr = {"r1": ri.r1, "r2": ri.r2, "r3": ri.r3}[which]
            s, t = (ri.target, ri.target) if which == "r3" else (ri.source, ri.target)
            return enumerate_matches(ri.graph, expr, s, t, self.bound(ri))
        return self._get(f"{variant}:{which}", make)

    def canonical_r2(self, variant: str) -> dict[tuple[Literal, int], Walk]:
        ri = getattr(self, variant)
        return {
            (Literal(i, p), j): canonical_r2_walk(ri, Literal(i, p), j)
            for i in range(1, ri.k + 1) for p in (True, False) for j in range(1, ri.l + 1)
        }


def _has_side_factor(w: Walk, i: int, side: str, l: int) -> bool:  # noqa: E741
    path = [f"Lx{i}"] + [f"{side}^{j}" for j in range(l + 1)] + [f"x{i}R"]
    verts, word = w.vertices, w.word
    for start in range(len(verts) - len(path) + 1):
        if list(verts[start:start + len(path)]) == path and \
                all(a == "1" for a in word[start:start + len(path) - 1]):
            return True
    return False


def _check_r1_properties(ctx: _Context) -> tuple[bool, dict, dict]:
    ri, inst = ctx.enum, ctx.inst
    r1s = ctx.matches("enum", "r1")
    lengths = sorted({len(w) for w in r1s})
    red = all(ri.colors[a] == "red" for w in r1s for a in w.word)
    endpoints = all(w.source == ri.source and w.target == ri.target for w in r1s)
    one_side = True
    one_clause = True
    for w in r1s:
        sides = r1_sides(ri, w)
        for i, pos in sides.items():
            taken = _has_side_factor(w, i, f"x{i}", ri.l), _has_side_factor(w, i, f"nx{i}", ri.l)
            one_side &= taken == (pos, not pos)
        one_clause &= len(r1_clause_choices(ri, w)) == ri.l
    formula = r1_length_formula(inst.k, inst.l)
    measured = {
        "count": len(r1s),
        "lengths": lengths,
        "formula_length": formula,
        "offset": lengths[0] - formula if len(lengths) == 1 else None,
        "all_red": red,
        "endpoints_ok": endpoints,
        "one_side_per_variable": one_side,
        "one_crossing_per_clause": one_clause,
        "star_height": star_height(ri.r1),
    }
    expected = {
        "count": 2 ** inst.k * 3 ** inst.l,
        "lengths": [formula + R1_LENGTH_OFFSET],
        "offset": R1_LENGTH_OFFSET,
        "all_red": True,
        "endpoints_ok": True,
        "one_side_per_variable": True,
        "one_crossing_per_clause": True,
        "star_height": 1,
    }
    ok = all(measured[key] == val for key, val in expected.items())
    return ok, measured, expected


def _check_r2_census(ctx: _Context) -> tuple[bool, dict, dict]:
    ri, inst = ctx.enum, ctx.inst
    found = set(ctx.matches("enum", "r2"))
    canon = set(ctx.canonical_r2("enum").values())
    bound = 4 * inst.k + inst.l + 6
    in_mm = mm_set(ri.graph, ri.r2, ri.source, ri.target)
    measured = {
        "count": len(found),
        "equals_canonical": found == canon,
        "max_length": max((len(w) for w in found), default=None),
        "all_shorter_than_bound": all(len(w) < bound for w in found),
        "none_is_trail": not any(is_trail(w) for w in found),
        "all_in_mm_r2": found == set(in_mm),
    }
    expected = {
        "count": 2 * inst.l * inst.k,
        "equals_canonical": True,
        "length_bound": bound,
        "all_shorter_than_bound": True,
        "none_is_trail": True,
        "all_in_mm_r2": True,
    }
    ok = all(measured[key] == val for key, val in expected.items() if key in measured)
    return ok, measured, expected


def _blue_green_multiplicities(ri: ReductionInstance, w3: Walk) -> tuple[int, int]:
    bag = edge_bag(w3)
    mults = [bag.get(e, 0) for e in ri.graph.edges if ri.colors[e[1]] != "red"]
    return min(mults), max(mults)


def _check_r3_unique(ctx: _Context) -> tuple[bool, dict, dict]:
    ri = ctx.enum
    found = ctx.matches("enum", "r3")
    lo, hi = _blue_green_multiplicities(ri, found[0]) if found else (None, None)
    measured = {
        "count": len(found),
        "equals_canonical": found == [canonical_r3_walk(ri)],
        "endpoints": [found[0].source, found[0].target] if found else None,
        "min_multiplicity": lo,
        "max_multiplicity": hi,
    }
    expected = {
        "count": 1,
        "equals_canonical": True,
        "endpoints": [ri.target, ri.target],
    }
    ok = all(measured[key] == val for key, val in expected.items()) and \
        lo is not None and 1 <= lo and hi <= 2
    expected["multiplicity_range"] = [1, 2]
    return ok, measured, expected


def _check_trail_iff_sat(ctx: _Context) -> tuple[bool, dict, dict]:
    ri = ctx.enum
    trails = enumerate_trail_matches(ri.graph, ri.r1, ri.source, ri.target)
    valuations_ok = all(satisfies(ctx.inst, valuation_of(ri, w)) for w in trails)
    measured = {
        "trails": len(trails),
        "sat": ctx.sat,
        "trail_exists": bool(trails),
        "trail_valuations_satisfy": valuations_ok,
    }
    expected = {"trail_exists": ctx.sat, "trail_valuations_satisfy": True}
    ok = measured["trail_exists"] == ctx.sat and valuations_ok
    return ok, measured, expected


def _check_red_inclusion(ctx: _Context) -> tuple[bool, dict, dict]:
    ri = ctx.enum
    r2_bags = [red_edge_bag(w, ri.colors) for w in ctx.canonical_r2("enum").values()]
    agree = disagree = 0
    for w1 in ctx.matches("enum", "r1"):
        bag1 = red_edge_bag(w1, ri.colors)
        lhs = not is_trail(w1)
        rhs = any(bag_le(b, bag1) for b in r2_bags)
        if lhs == rhs:
            agree += 1
        else:
            disagree += 1
    n = len(ctx.matches("enum", "r1"))
    measured = {"r1_matches": n, "agree": agree, "disagree": disagree}
    expected = {"r1_matches": 2 ** ctx.inst.k * 3 ** ctx.inst.l, "disagree": 0}
    return disagree == 0 and n == expected["r1_matches"], measured, expected


def _check_equiv_three_way(ctx: _Context) -> tuple[bool, dict, dict]:
    ri = ctx.enum
    w3 = ctx.matches("enum", "r3")[0]
    r2_bags = [edge_bag(w) for w in ctx.matches("enum", "r2")]
    agree = disagree = non_trails = 0
    for w1 in ctx.matches("enum", "r1"):
        w = concat(w1, w3)
        bag = edge_bag(w)
        a = not is_trail(w1)
        b = any(bag_le(b2, bag) and sum(b2.values()) < len(w) for b2 in r2_bags)
        c = not mm_membership(ri.graph, ri.r, w)
        non_trails += a
        if a == b == c:
            agree += 1
        else:
            disagree += 1
    n = len(ctx.matches("enum", "r1"))
    measured = {"r1_matches": n, "non_trails": non_trails, "agree": agree, "disagree": disagree}
    expected = {"r1_matches": 2 ** ctx.inst.k * 3 ** ctx.inst.l, "disagree": 0}
    return disagree == 0 and n == expected["r1_matches"], measured, expected


def _check_end_to_end(ctx: _Context) -> tuple[bool, dict, dict]:
    ri, inst = ctx.enum, ctx.inst
    mm = mm_set(ri.graph, ri.r, ri.source, ri.target)
    easy = set(ctx.matches("enum", "r2"))
    w3 = ctx.matches("enum", "r3")[0]
    hard_expected = {concat(w1, w3) for w1 in ctx.matches("enum", "r1") if is_trail(w1)}
    n_easy = 2 * inst.l * inst.k
    measured = {
        "mm_size": len(mm),
        "sat": ctx.sat,
        "easy_present": easy <= mm,
        "hard_outputs_are_trails_times_w3": set(mm) - easy == hard_expected,
    }
    expected = {
        "mm_size": f"> {n_easy}" if ctx.sat else n_easy,
        "easy_present": True,
        "hard_outputs_are_trails_times_w3": True,
    }
    size_ok = len(mm) > n_easy if ctx.sat else len(mm) == n_easy
    ok = size_ok and measured["easy_present"] and measured["hard_outputs_are_trails_times_w3"]
    return ok, measured, expected


def _check_membership_variant(ctx: _Context) -> tuple[bool, dict, dict]:
    ri = ctx.membership
    w2 = ri.witness
    red_edges = [e for e in ri.graph.edges if ri.colors[e[1]] == "red"]
    bag = red_edge_bag(w2, ri.colors)
    red_mults = sorted({bag.get(e, 0) for e in red_edges})
    matches_r2 = accepts(to_nfa(ri.r2), w2.word)
    member = mm_membership(ri.graph, ri.r, w2)
    certificate = None if member else mm_dominator(ri.graph, ri.r, w2)
    minimal_among_r2 = mm_membership(ri.graph, ri.r2, w2)
    prod = Product(ri.graph, ri.r2, ri.source, ri.target)
    shortest_r2 = prod.goal_dist.get(prod.start)
    measured = {
        "witness_length": len(w2),
        "witness_matches_r2": matches_r2,
        "red_multiplicities": red_mults,
        "witness_minimal_among_r2": minimal_among_r2,
        "member": member,
        "sat": ctx.sat,
        "certificate_is_trail": None if certificate is None else is_trail(certificate),
        "shortest_r2_length": shortest_r2,
    }
    expected = {
        "witness_matches_r2": True,
        "red_multiplicities": [1],
        "witness_minimal_among_r2": True,
        "member": not ctx.sat,
    }
    ok = all(measured[key] == val for key, val in expected.items())
    if certificate is not None:
        ok &= is_trail(certificate) and accepts(to_nfa(ri.r1), certificate.word)
    return ok, measured, expected


def _check_sms_variant(ctx: _Context) -> tuple[bool, dict, dict]:
    ri, inst = ctx.sms, ctx.inst
    found = set(ctx.matches("sms", "r2"))
    canon = ctx.canonical_r2("sms")
    r3s = ctx.matches("sms", "r3")

    def shape_ok(w: Walk, alpha: Literal) -> bool:
        # one full side of a gadget, plus exactly one 1-edge of the other side
        ones = [e for e in w.edges() if e[1] == "1"]
        own = [e for e in ones if e[0].startswith(alpha.side + "^")]
        other = [e for e in ones if e[0].startswith(alpha.negated.side + "^")]
        return len(own) == inst.l and len(other) == 1 and len(ones) == inst.l + 1

    sms = sms_set(ri.graph, ri.r, ri.source, ri.target)
    ordered = sorted(sms, key=lambda w: w.sort_key)
    antichain = not any(set_lt(a, b) for a in ordered for b in ordered if a != b)
    n_easy = 2 * inst.l * inst.k
    measured = {
        "r2_count": len(found),
        "r2_equals_canonical": found == set(canon.values()),
        "r2_shape_ok": all(shape_ok(w, alpha) for (alpha, _), w in canon.items()),
        "r3_unique": r3s == [canonical_r3_walk(ri)],
        "sms_size": len(sms),
        "antichain": antichain,
        "easy_present": found <= sms,
        "sat": ctx.sat,
    }
    expected = {
        "r2_count": n_easy,
        "r2_equals_canonical": True,
        "r2_shape_ok": True,
        "r3_unique": True,
        "sms_size": f"> {n_easy}" if ctx.sat else n_easy,
        "antichain": True,
        "easy_present": True,
    }
    size_ok = len(sms) > n_easy if ctx.sat else len(sms) == n_easy
    ok = size_ok and all(measured[key] == val for key, val in expected.items() if key != "sms_size")
    return ok, measured, expected


_RUNNERS = {
    "r1_properties": _check_r1_properties,
    "r2_census": _check_r2_census,
    "r3_unique": _check_r3_unique,
    "trail_iff_sat": _check_trail_iff_sat,
    "red_inclusion": _check_red_inclusion,
    "equiv_three_way": _check_equiv_three_way,
    "end_to_end": _check_end_to_end,
    "membership_variant": _check_membership_variant,
    "sms_variant": _check_sms_variant,
}


def _guard(inst: SatInstance, force: bool, max_k: int, max_l: int) -> None:
    if not force and (inst.k > max_k or inst.l > max_l):
        raise InstanceTooLargeError(
            f"instance k={inst.k}, l={inst.l} exceeds the cap k<={max_k}, l<={max_l}; "
            "override with force (--force on the command line)")


def check_all(inst: SatInstance, checks: Iterable[str] | None = None, force: bool = False,
              seed: int | None = None, max_k: int = DEFAULT_MAX_K,
              max_l: int = DEFAULT_MAX_L) -> VerificationReport:
    """Run the selected checks (all by default, in canonical order) on ``inst``."""
    _guard(inst, force, max_k, max_l)
    selected = list(CHECKS) if checks is None else list(checks)
    unknown = [c for c in selected if c not in _RUNNERS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; expected some of {list(CHECKS)}")
    ctx = _Context(inst)
    report = VerificationReport(inst.k, inst.l, inst.as_lists(), seed=seed)
    for name in CHECKS:
        if name not in selected:
            continue
        t0 = time.perf_counter()
        ok, measured, expected = _RUNNERS[name](ctx)
        report.checks.append(CheckResult(name, bool(ok), measured, expected,
                                         time.perf_counter() - t0))
    return report


# -- delay -------------------------------------------------------------------

@dataclass
class DelayProfile:
    """Cumulative work (product expansions + candidate comparisons) at each output."""

    entries: list[tuple[int, int]]
    total_steps: int
    easy_count: int | None = None
    wall_clock: float = 0.0

    @property
    def gaps(self) -> list[int]:
        prev, out = 0, []
        for _, steps in self.entries:
            out.append(steps - prev)
            prev = steps
        return out

    @property
    def gap_after_easy(self) -> int | None:
        """Work between the last easy output and the next output, or the end."""
        if self.easy_count is None or len(self.entries) < self.easy_count or self.easy_count == 0:
            return None
        last = self.entries[self.easy_count - 1][1]
        if len(self.entries) > self.easy_count:
            return self.entries[self.easy_count][1] - last
        return self.total_steps - last


def profile_enumeration(g, r, s: str, t: str, order: str = "mm",
                        easy_count: int | None = None) -> DelayProfile:
    stats = SearchStats()
    entries: list[tuple[int, int]] = []

    def record(_w: Walk, st: SearchStats) -> None:
        entries.append((len(entries) + 1, st.expansions + st.candidates))

    t0 = time.perf_counter()
    for _ in iter_minimal(g, r, s, t, order, stats=stats, on_output=record):
        pass
    return DelayProfile(entries, stats.expansions + stats.candidates, easy_count,
                        time.perf_counter() - t0)


def delay_profile(inst: SatInstance, force: bool = False, order: str = "mm") -> DelayProfile:
    """Profile the minimal-multiset (or minimal-set) enumeration on the gadget graph."""
    _guard(inst, force, DEFAULT_MAX_K, DEFAULT_MAX_L)
    ri = build_enum_instance(inst) if order == "mm" else build_sms_instance(inst)
    return profile_enumeration(ri.graph, ri.r, ri.source, ri.target, order,
                               easy_count=2 * inst.k * inst.l)


def random_instances(n: int, seed: int, k_range: Sequence[int] = (3, 4),
                     l_range: Sequence[int] = (1, 4)) -> list[SatInstance]:
    """``n`` instances with k, ℓ uniform in the inclusive ranges, from one seeded stream."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        k = rng.randint(*k_range)
        l = rng.randint(*l_range)  # noqa: E741
        out.append(random_instance(k, l, rng))
    return out

