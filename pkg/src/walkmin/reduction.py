"""Compile 3-CNF formulas into gadget graphs and fixed query expressions.

Three variants share the red part of the graph:

``enum``
    ``R = R1·R3 + R2``; the minimal-multiset answer between ``Source`` and
    ``Target`` has more than ``2·k·ℓ`` walks iff the formula is satisfiable.
``membership``
    ``R = R1 + R2'`` with a green letter ``G``; the witness walk, which uses
    every red edge once, is minimal iff the formula is unsatisfiable.
``sms``
    4-edges rewired across the two sides of each variable gadget, plus a blue
    letter ``4'``; same counting statement for the minimal-set semantics.

Vertex names
------------
``Source``, ``Target``; ``start_x{i}``/``start_nx{i}`` and ``end_x{i}``/``end_nx{i}``;
``Lx{i}``/``x{i}R`` for the entry/exit of variable gadget ``i``;
``LSx{i}``, ``Sx{i}R``, ``LSnx{i}``, ``Snx{i}R`` for the blue side entries/exits;
``x{i}^{j}``/``nx{i}^{j}`` for the side vertices (``j`` in ``0..ℓ``);
``LC{j}``/``C{j}R`` for clause gadgets; and the glue vertices ``x0R``,
``Lx{k+1}``, ``C0R``, ``LC{ℓ+1}``, ``Sx0R``, ``LSx{k+1}``, ``Snx0R``,
``LSnx{k+1}``. An ``L`` prefix stands for an incoming-side triangle and an
``R`` suffix for an outgoing one.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .graph import Edge, Graph, Walk, WalkError, graph_to_json, validate_walk, walk_to_json
from .regex import Concat, RegExp, Union, accepts, parse, to_nfa, to_string

__all__ = [
    "Literal",
    "SatInstance",
    "ReductionInstance",
    "DimacsError",
    "InstanceTooLargeError",
    "R1_TEXT",
    "R2_TEXT",
    "R3_TEXT",
    "R2_MEMBERSHIP_TEXT",
    "R2_SMS_TEXT",
    "R3_SMS_TEXT",
    "ENUM_COLORS",
    "parse_dimacs",
    "to_dimacs",
    "make_instance",
    "random_instance",
    "satisfies",
    "sat_oracle",
    "build_enum_instance",
    "build_membership_instance",
    "build_sms_instance",
    "build_instance",
    "canonical_r2_walk",
    "canonical_r3_walk",
    "valuation_of",
    "r1_sides",
    "r1_clause_choices",
    "expected_vertex_count",
]

R1_TEXT = "0(1+2+313)*0"
R2_TEXT = "02*551*41*552*0"
R3_TEXT = "9(8+755+646+557)*X"
R2_MEMBERSHIP_TEXT = "0(11*G11*+2+3G3G3G3G3G3)*0"
R2_SMS_TEXT = "02*551*414'1*552*0"
R3_SMS_TEXT = "9(8+755+6464'+557)*X"

ENUM_COLORS = {
    **{a: "red" for a in "0123"},
    **{a: "blue" for a in "45"},
    **{a: "green" for a in ("6", "7", "8", "9", "X")},
}

VARIANTS = ("enum", "membership", "sms")
MAX_ORACLE_VARS = 24


class DimacsError(ValueError):
    pass


class InstanceTooLargeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    positive: bool = True

    @property
    def side(self) -> str:
        """Vertex-name prefix of the gadget side this literal designates."""
        return f"x{self.var}" if self.positive else f"nx{self.var}"

    @property
    def negated(self) -> Literal:
        return Literal(self.var, not self.positive)

    def to_int(self) -> int:
        return self.var if self.positive else -self.var

    @classmethod
    def from_int(cls, n: int) -> Literal:
        if n == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(n), n > 0)

    def __str__(self) -> str:
        return ("" if self.positive else "¬") + f"x{self.var}"


Clause = tuple[Literal, Literal, Literal]


@dataclass(frozen=True)
class SatInstance:
    """A 3-CNF over variables ``1..k``; each clause has three distinct variables."""

    k: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.k < 1:
            raise DimacsError("need at least one variable")
        if not self.clauses:
            raise DimacsError("need at least one clause")
        for clause in self.clauses:
            if len(clause) != 3:
                raise DimacsError(f"clause {clause} does not have 3 literals")
            if len({lit.var for lit in clause}) != 3:
                raise DimacsError(f"clause {[str(x) for x in clause]} repeats a variable")
            for lit in clause:
                if not 1 <= lit.var <= self.k:
                    raise DimacsError(f"variable {lit.var} out of range 1..{self.k}")

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.clauses)

    def as_lists(self) -> list[list[int]]:
        return [[lit.to_int() for lit in c] for c in self.clauses]

    def __str__(self) -> str:
        return " ∧ ".join("(" + " ∨ ".join(map(str, c)) + ")" for c in self.clauses)


def _normalize_clause(ints: Iterable[int], k: int) -> Clause:
    lits = {Literal.from_int(n) for n in ints}
    by_var: dict[int, set[bool]] = {}
    for lit in lits:
        by_var.setdefault(lit.var, set()).add(lit.positive)
    if any(len(signs) > 1 for signs in by_var.values()):
        raise DimacsError(f"tautological clause {sorted(lit.to_int() for lit in lits)}")
    if len(lits) != 3:
        raise DimacsError(f"clause needs 3 distinct variables, got {len(lits)}")
    for lit in lits:
        if not 1 <= lit.var <= k:
            raise DimacsError(f"variable {lit.var} out of range 1..{k}")
    return tuple(sorted(lits))


def make_instance(k: int, clauses: Iterable[Iterable[int]]) -> SatInstance:
    """Instance from DIMACS-style signed integers, normalized."""
    return SatInstance(k, tuple(_normalize_clause(c, k) for c in clauses))


def parse_dimacs(text: str) -> SatInstance:
    k = n_clauses = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if k is not None:
                raise DimacsError(f"line {lineno}: second header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                k, n_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            continue
        if k is None:
            raise DimacsError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                n = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad literal {tok!r}") from None
            if n == 0:
                clauses.append(current)
                current = []
            else:
                current.append(n)
    if k is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        clauses.append(current)
    if n_clauses != len(clauses):
        raise DimacsError(f"header announces {n_clauses} clauses, found {len(clauses)}")
    return make_instance(k, clauses)


def to_dimacs(inst: SatInstance) -> str:
    lines = [f"p cnf {inst.k} {inst.l}"]
    lines += [" ".join(str(n) for n in c) + " 0" for c in inst.as_lists()]
    return "\n".join(lines) + "\n"


def random_instance(k: int, l: int, rng: random.Random) -> SatInstance:  # noqa: E741
    """Clauses drawn uniformly among 3-variable, non-tautological sign patterns."""
    if k < 3:
        raise ValueError("three distinct variables per clause need k >= 3")
    clauses = []
    for _ in range(l):
        vs = rng.sample(range(1, k + 1), 3)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return make_instance(k, clauses)


def satisfies(inst: SatInstance, valuation: Mapping[int, bool]) -> bool:
    return all(any(valuation[lit.var] == lit.positive for lit in c) for c in inst.clauses)


def sat_oracle(inst: SatInstance) -> bool:
    """Brute force over all ``2^k`` valuations."""
    if inst.k > MAX_ORACLE_VARS:
        raise InstanceTooLargeError(f"brute force refuses k={inst.k} > {MAX_ORACLE_VARS}")
    for bits in itertools.product((False, True), repeat=inst.k):
        if satisfies(inst, dict(enumerate(bits, 1))):
            return True
    return False


# -- gadget graph ------------------------------------------------------------

@dataclass(frozen=True)
class ReductionInstance:
    instance: SatInstance
    variant: str
    graph: Graph
    colors: dict[str, str]
    r1: RegExp
    r2: RegExp
    r3: RegExp | None
    r: RegExp
    source: str = "Source"
    target: str = "Target"
    witness: Walk | None = None
    notes: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.instance.k

    @property
    def l(self) -> int:  # noqa: E743
        return self.instance.l

    def manifest(self) -> dict:
        doc = {
            "variant": self.variant,
            "k": self.k,
            "l": self.l,
            "clauses": self.instance.as_lists(),
            "R1": to_string(self.r1),
            "R2": to_string(self.r2),
            "R3": None if self.r3 is None else to_string(self.r3),
            "R": to_string(self.r),
            "source": self.source,
            "target": self.target,
            "witness": None if self.witness is None else walk_to_json(self.witness),
        }
        if self.notes:
            doc["notes"] = dict(self.notes)
        return doc

    def graph_json(self) -> dict:
        return graph_to_json(self.graph, self.colors)


def _lits(i: int) -> tuple[Literal, Literal]:
    return Literal(i, True), Literal(i, False)


def _red_edges(inst: SatInstance) -> list[Edge]:
    k, l = inst.k, inst.l
    E: list[Edge] = [("Source", "0", "start_x1")]
    # start gadget
    for i in range(1, k + 1):
        E.append((f"start_x{i}", "2", f"start_nx{i}"))
        if i < k:
            E.append((f"start_nx{i}", "2", f"start_x{i + 1}"))
    # inter-gadget red edges follow the glue gadget
    E.append((f"start_nx{k}", "1", "x0R"))
    E.append(("x0R", "1", "Lx1"))
    for i in range(1, k + 1):
        for lit in _lits(i):
            a = lit.side
            E.append((f"Lx{i}", "1", f"{a}^0"))
            for j in range(1, l + 1):
                E.append((f"{a}^{j - 1}", "1", f"{a}^{j}"))
            E.append((f"{a}^{l}", "1", f"x{i}R"))
        E.append((f"x{i}R", "2" if i < k else "1", f"Lx{i + 1}"))
    E.append((f"Lx{k + 1}", "1", "C0R"))
    E.append(("C0R", "1", "LC1"))
    for j, clause in enumerate(inst.clauses, 1):
        for lit in clause:
            E.append((f"LC{j}", "3", f"{lit.side}^{j - 1}"))
            E.append((f"{lit.side}^{j}", "3", f"C{j}R"))
        E.append((f"C{j}R", "2", f"LC{j + 1}"))
    E.append((f"LC{l + 1}", "2", "end_x1"))
    for i in range(1, k + 1):
        E.append((f"end_x{i}", "2", f"end_nx{i}"))
        if i < k:
            E.append((f"end_nx{i}", "2", f"end_x{i + 1}"))
    E.append((f"end_nx{k}", "0", "Target"))
    return E


def _blue_green_edges(inst: SatInstance) -> list[Edge]:
    k, l = inst.k, inst.l
    E: list[Edge] = []
    for i in range(1, k + 1):
        for lit in _lits(i):
            a = lit.side
            E += [
                (f"start_{a}", "5", f"LS{a}"),
                (f"LS{a}", "7", f"start_{a}"),
                (f"LS{a}", "5", f"{a}^0"),
                (f"{a}^{l}", "5", f"S{a}R"),
                (f"S{a}R", "5", f"end_{a}"),
                (f"end_{a}", "7", f"S{a}R"),
            ]
            for j in range(1, l + 1):
                E.append((f"{a}^{j - 1}", "6", f"{a}^{j}"))
                E.append((f"{a}^{j}", "4", f"{a}^{j - 1}"))
    for prefix in ("x", "nx"):
        for i in range(0, k + 1):
            E.append((f"S{prefix}{i}R", "8", f"LS{prefix}{i + 1}"))
    E += [
        ("Target", "9", "Sx0R"),
        (f"LSx{k + 1}", "8", "Snx0R"),
        (f"LSnx{k + 1}", "X", "Target"),
    ]
    return E


def _colors_for(labels: Iterable[str]) -> dict[str, str]:
    table = dict(ENUM_COLORS, G="green")
    table["4'"] = "blue"
    return {a: table[a] for a in labels}


def _finish(inst: SatInstance, variant: str, edges: list[Edge], r1: RegExp, r2: RegExp,
            r3: RegExp | None, r: RegExp, witness: Walk | None = None,
            notes: dict | None = None) -> ReductionInstance:
    g = Graph.from_edges(edges)
    if len(g.edges) != len(edges):
        raise AssertionError("gadget construction produced a duplicate edge")
    return ReductionInstance(inst, variant, g, _colors_for(g.labels), r1, r2, r3, r,
                             witness=witness, notes=notes or {})


def build_enum_instance(inst: SatInstance) -> ReductionInstance:
    r1, r2, r3 = parse(R1_TEXT), parse(R2_TEXT), parse(R3_TEXT)
    edges = _red_edges(inst) + _blue_green_edges(inst)
    return _finish(inst, "enum", edges, r1, r2, r3, Union(Concat(r1, r3), r2))


def _membership_witness(inst: SatInstance) -> Walk:
    k, l = inst.k, inst.l
    E: list[Edge] = [("Source", "0", "start_x1")]
    for i in range(1, k + 1):
        E.append((f"start_x{i}", "2", f"start_nx{i}"))
        if i < k:
            E.append((f"start_nx{i}", "2", f"start_x{i + 1}"))
    E += [(f"start_nx{k}", "1", "x0R"), ("x0R", "1", "Lx1")]
    for i in range(1, k + 1):
        pos, neg = _lits(i)
        for n, lit in enumerate((pos, neg)):
            a = lit.side
            E.append((f"Lx{i}", "1", f"{a}^0"))
            E += [(f"{a}^{j - 1}", "1", f"{a}^{j}") for j in range(1, l + 1)]
            E.append((f"{a}^{l}", "1", f"x{i}R"))
            if n == 0:
                E.append((f"x{i}R", "G", f"Lx{i}"))
        E.append((f"x{i}R", "2" if i < k else "1", f"Lx{i + 1}"))
    E += [(f"Lx{k + 1}", "1", "C0R"), ("C0R", "1", "LC1")]
    for j, clause in enumerate(inst.clauses, 1):
        for n, lit in enumerate(clause):
            a = lit.side
            E += [
                (f"LC{j}", "3", f"{a}^{j - 1}"),
                (f"{a}^{j - 1}", "G", f"{a}^{j}"),
                (f"{a}^{j}", "3", f"C{j}R"),
            ]
            if n < 2:
                E.append((f"C{j}R", "G", f"LC{j}"))
        E.append((f"C{j}R", "2", f"LC{j + 1}"))
    E.append((f"LC{l + 1}", "2", "end_x1"))
    for i in range(1, k + 1):
        E.append((f"end_x{i}", "2", f"end_nx{i}"))
        if i < k:
            E.append((f"end_nx{i}", "2", f"end_x{i + 1}"))
    E.append((f"end_nx{k}", "0", "Target"))
    return Walk.from_edges(E)


def build_membership_instance(inst: SatInstance) -> ReductionInstance:
    k, l = inst.k, inst.l
    edges = _red_edges(inst)
    edges += [(f"x{i}R", "G", f"Lx{i}") for i in range(1, k + 1)]
    edges += [(f"C{j}R", "G", f"LC{j}") for j in range(1, l + 1)]
    seen = set()
    for j, clause in enumerate(inst.clauses, 1):
        for lit in clause:
            e = (f"{lit.side}^{j - 1}", "G", f"{lit.side}^{j}")
            if e not in seen:
                seen.add(e)
                edges.append(e)
    r1, r2 = parse(R1_TEXT), parse(R2_MEMBERSHIP_TEXT)
    return _finish(inst, "membership", edges, r1, r2, None, Union(r1, r2),
                   witness=_membership_witness(inst))


def build_sms_instance(inst: SatInstance) -> ReductionInstance:
    enum_edges = _red_edges(inst) + _blue_green_edges(inst)
    edges = [e for e in enum_edges if e[1] != "4"]
    for i in range(1, inst.k + 1):
        for j in range(1, inst.l + 1):
            edges += [
                (f"x{i}^{j}", "4", f"nx{i}^{j - 1}"),
                (f"nx{i}^{j}", "4'", f"x{i}^{j}"),
                (f"nx{i}^{j}", "4", f"x{i}^{j - 1}"),
                (f"x{i}^{j}", "4'", f"nx{i}^{j}"),
            ]
    r1, r2, r3 = parse(R1_TEXT), parse(R2_SMS_TEXT), parse(R3_SMS_TEXT)
    return _finish(inst, "sms", edges, r1, r2, r3, Union(Concat(r1, r3), r2),
                   notes={"R2_trailing_0_restored": True})


def build_instance(inst: SatInstance, variant: str) -> ReductionInstance:
    builders = {
        "enum": build_enum_instance,
        "membership": build_membership_instance,
        "sms": build_sms_instance,
    }
    try:
        return builders[variant](inst)
    except KeyError:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}") from None


def expected_vertex_count(k: int, l: int) -> int:  # noqa: E741
    """|V| of the enum and sms graphs."""
    return 2 * k * l + 12 * k + 2 * l + 10


# -- canonical walks and valuations ------------------------------------------

def _start_chain(k: int, upto: Literal) -> list[Edge]:
    """Source to start_{upto} along the start gadget."""
    order = [lit.side for i in range(1, k + 1) for lit in _lits(i)]
    E: list[Edge] = [("Source", "0", "start_x1")]
    for a, b in zip(order, order[1:]):
        if a == upto.side:
            break
        E.append((f"start_{a}", "2", f"start_{b}"))
    return E


def _end_chain(k: int, frm: Literal) -> list[Edge]:
    order = [lit.side for i in range(1, k + 1) for lit in _lits(i)]
    idx = order.index(frm.side)
    E = [(f"end_{a}", "2", f"end_{b}") for a, b in zip(order[idx:], order[idx + 1:])]
    E.append((f"end_nx{k}", "0", "Target"))
    return E


def canonical_r2_walk(ri: ReductionInstance, alpha: Literal, j: int) -> Walk:
    """The R2-match that repeats (enum) or crosses at (sms) the ``j``-th 1-edge
    of the side of ``alpha``."""
    if ri.variant not in ("enum", "sms"):
        raise ValueError(f"no canonical R2 walk in the {ri.variant!r} variant")
    if not 1 <= alpha.var <= ri.k:
        raise IndexError(f"variable {alpha.var} out of range")
    if not 1 <= j <= ri.l:
        raise IndexError(f"clause index {j} out of range")
    a, b, l = alpha.side, alpha.negated.side, ri.l
    E = _start_chain(ri.k, alpha)
    E += [(f"start_{a}", "5", f"LS{a}"), (f"LS{a}", "5", f"{a}^0")]
    E += [(f"{a}^{m - 1}", "1", f"{a}^{m}") for m in range(1, j + 1)]
    if ri.variant == "enum":
        E += [(f"{a}^{j}", "4", f"{a}^{j - 1}"), (f"{a}^{j - 1}", "1", f"{a}^{j}")]
    else:
        E += [
            (f"{a}^{j}", "4", f"{b}^{j - 1}"),
            (f"{b}^{j - 1}", "1", f"{b}^{j}"),
            (f"{b}^{j}", "4'", f"{a}^{j}"),
        ]
    E += [(f"{a}^{m - 1}", "1", f"{a}^{m}") for m in range(j + 1, l + 1)]
    E += [(f"{a}^{l}", "5", f"S{a}R"), (f"S{a}R", "5", f"end_{a}")]
    E += _end_chain(ri.k, alpha)
    return Walk.from_edges(E)


def canonical_r3_walk(ri: ReductionInstance) -> Walk:
    """The unique R3-match, a green/blue circuit from Target to Target."""
    if ri.variant not in ("enum", "sms"):
        raise ValueError(f"no R3 in the {ri.variant!r} variant")
    k, l = ri.k, ri.l
    E: list[Edge] = [("Target", "9", "Sx0R")]
    for prefix, positive in (("x", True), ("nx", False)):
        for i in range(1, k + 1):
            lit = Literal(i, positive)
            a, b = lit.side, lit.negated.side
            E += [
                (f"S{prefix}{i - 1}R", "8", f"LS{a}"),
                (f"LS{a}", "7", f"start_{a}"),
                (f"start_{a}", "5", f"LS{a}"),
                (f"LS{a}", "5", f"{a}^0"),
            ]
            for m in range(l):
                if ri.variant == "enum":
                    E += [
                        (f"{a}^{m}", "6", f"{a}^{m + 1}"),
                        (f"{a}^{m + 1}", "4", f"{a}^{m}"),
                        (f"{a}^{m}", "6", f"{a}^{m + 1}"),
                    ]
                else:
                    E += [
                        (f"{a}^{m}", "6", f"{a}^{m + 1}"),
                        (f"{a}^{m + 1}", "4", f"{b}^{m}"),
                        (f"{b}^{m}", "6", f"{b}^{m + 1}"),
                        (f"{b}^{m + 1}", "4'", f"{a}^{m + 1}"),
                    ]
            E += [
                (f"{a}^{l}", "5", f"S{a}R"),
                (f"S{a}R", "5", f"end_{a}"),
                (f"end_{a}", "7", f"S{a}R"),
            ]
        E.append((f"S{prefix}{k}R", "8", f"LS{prefix}{k + 1}"))
        if positive:
            E.append((f"LSx{k + 1}", "8", "Snx0R"))
    E.append((f"LSnx{k + 1}", "X", "Target"))
    return Walk.from_edges(E)


def _check_r1_match(ri: ReductionInstance, w1: Walk) -> None:
    if not (validate_walk(ri.graph, w1) and accepts(to_nfa(ri.r1), w1.word)):
        raise WalkError("walk is not an R1-match of this instance")
    if w1.source != ri.source or w1.target != ri.target:
        raise WalkError("R1-match does not run from Source to Target")


def r1_sides(ri: ReductionInstance, w1: Walk) -> dict[int, bool]:
    """variable -> True when ``w1`` traverses the positive side of its gadget."""
    _check_r1_match(ri, w1)
    edges = set(w1.edges())
    sides = {}
    for i in range(1, ri.k + 1):
        pos = (f"Lx{i}", "1", f"x{i}^0") in edges
        neg = (f"Lx{i}", "1", f"nx{i}^0") in edges
        if pos == neg:
            raise WalkError(f"R1-match does not traverse exactly one side of gadget x{i}")
        sides[i] = pos
    return sides


def r1_clause_choices(ri: ReductionInstance, w1: Walk) -> list[Literal]:
    """The literal through which ``w1`` crosses each clause gadget."""
    _check_r1_match(ri, w1)
    chosen = []
    edges = w1.edges()
    for j in range(1, ri.l + 1):
        picks = [e for e in edges if e[0] == f"LC{j}" and e[1] == "3"]
        if len(picks) != 1:
            raise WalkError(f"R1-match crosses clause gadget C{j} {len(picks)} times")
        side = picks[0][2].split("^")[0]
        var = int(side.lstrip("nx"))
        chosen.append(Literal(var, not side.startswith("n")))
    return chosen


def valuation_of(ri: ReductionInstance, w1: Walk) -> dict[int, bool]:
    """Valuation read off an R1-match: a variable is true iff the walk takes the
    negative side of its gadget."""
    return {i: not positive for i, positive in r1_sides(ri, w1).items()}
