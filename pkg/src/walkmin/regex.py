"""Regular expressions over token alphabets and their Glushkov automata.

Concrete syntax::

    EXPR   := TERM ('+' TERM)*
    TERM   := FACTOR ('.'? FACTOR)*
    FACTOR := BASE '*'*
    BASE   := ATOM | '_' | '(' EXPR ')'
    ATOM   := [A-Za-z0-9] "'"*

``_`` is the empty word. Whitespace between tokens is ignored. Concatenation
and union both associate to the right, so ``abc`` is ``a(bc)``.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "RegExp",
    "Epsilon",
    "Atom",
    "Star",
    "Concat",
    "Union",
    "RegexSyntaxError",
    "Nfa",
    "parse",
    "to_string",
    "star_height",
    "atoms",
    "alphabet",
    "to_nfa",
    "accepts",
    "concat_all",
    "union_all",
]


class RegExp:
    """Base class of expression nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True, slots=True)
class Epsilon(RegExp):
    pass


@dataclass(frozen=True, slots=True)
class Atom(RegExp):
    label: str

    def __post_init__(self):
        if not self.label:
            raise ValueError("atom label must be a nonempty token")


@dataclass(frozen=True, slots=True)
class Star(RegExp):
    child: RegExp


@dataclass(frozen=True, slots=True)
class Concat(RegExp):
    left: RegExp
    right: RegExp


@dataclass(frozen=True, slots=True)
class Union(RegExp):
    left: RegExp
    right: RegExp


class RegexSyntaxError(ValueError):
    """Malformed expression text. ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def concat_all(parts: Sequence[RegExp]) -> RegExp:
    """Right-nested concatenation; the empty sequence gives ε."""
    if not parts:
        return Epsilon()
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Concat(part, result)
    return result


def union_all(parts: Sequence[RegExp]) -> RegExp:
    if not parts:
        raise ValueError("union of zero expressions")
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Union(part, result)
    return result


# -- parsing -----------------------------------------------------------------

def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isascii() and c.isalnum():
            j = i + 1
            while j < n and text[j] == "'":
                j += 1
            tokens.append(("atom", text[i:j], i))
            i = j
        elif c in "()+*._":
            tokens.append((c, c, i))
            i += 1
        else:
            raise RegexSyntaxError(f"unknown character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise RegexSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> RegExp:
        terms = [self.term()]
        while self.peek()[0] == "+":
            self.i += 1
            terms.append(self.term())
        return union_all(terms)

    def term(self) -> RegExp:
        factors = [self.factor()]
        while True:
            kind = self.peek()[0]
            if kind == ".":
                self.i += 1
                factors.append(self.factor())
            elif kind in ("atom", "_", "("):
                factors.append(self.factor())
            else:
                break
        return concat_all(factors)

    def factor(self) -> RegExp:
        node = self.base()
        while self.peek()[0] == "*":
            self.i += 1
            node = Star(node)
        return node

    def base(self) -> RegExp:
        kind, value, pos = self.peek()
        if kind == "atom":
            self.i += 1
            return Atom(value)
        if kind == "_":
            self.i += 1
            return Epsilon()
        if kind == "(":
            self.i += 1
            node = self.expr()
            self.take(")")
            return node
        what = "end of input" if kind == "end" else repr(value)
        raise RegexSyntaxError(f"unexpected {what}", pos)


def parse(text: str) -> RegExp:
    """Parse ``text`` into an expression tree.

    >>> parse("0(1+2)*0") == Concat(Atom("0"), Concat(Star(Union(Atom("1"), Atom("2"))), Atom("0")))
    True
    """
    parser = _Parser(text)
    node = parser.expr()
    parser.take("end")
    return node


def to_string(r: RegExp) -> str:
    """Render ``r`` with the fewest parentheses that re-parse to the same tree."""
    if isinstance(r, Epsilon):
        return "_"
    if isinstance(r, Atom):
        return r.label
    if isinstance(r, Star):
        inner = to_string(r.child)
        if not isinstance(r.child, (Atom, Epsilon, Star)):
            inner = f"({inner})"
        return inner + "*"
    if isinstance(r, Concat):
        left = to_string(r.left)
        if isinstance(r.left, (Union, Concat)):
            left = f"({left})"
        right = to_string(r.right)
        if isinstance(r.right, Union):
            right = f"({right})"
        return left + right
    if isinstance(r, Union):
        left = to_string(r.left)
        if isinstance(r.left, Union):
            left = f"({left})"
        return f"{left}+{to_string(r.right)}"
    raise TypeError(f"not a regular expression: {r!r}")


def star_height(r: RegExp) -> int:
    if isinstance(r, (Epsilon, Atom)):
        return 0
    if isinstance(r, Star):
        return 1 + star_height(r.child)
    return max(star_height(r.left), star_height(r.right))


def atoms(r: RegExp) -> list[str]:
    """Atom labels in left-to-right order (one entry per occurrence)."""
    out: list[str] = []
    stack = [r]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            out.append(node.label)
        elif isinstance(node, Star):
            stack.append(node.child)
        elif isinstance(node, (Concat, Union)):
            stack.append(node.right)
            stack.append(node.left)
    return out


def alphabet(r: RegExp) -> frozenset[str]:
    return frozenset(atoms(r))


# -- automaton ---------------------------------------------------------------

@dataclass(frozen=True)
class Nfa:
    """ε-free automaton. State 0 is initial; state p >= 1 is the p-th atom."""

    n_states: int
    initial: int
    finals: frozenset[int]
    transitions: frozenset[tuple[int, str, int]]
    position_labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for p, _, q in self.transitions:
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError(f"transition ({p}, {q}) out of range")
        if any(not 0 <= f < self.n_states for f in self.finals):
            raise ValueError("final state out of range")

    @cached_property
    def delta(self) -> dict[tuple[int, str], tuple[int, ...]]:
        """(state, label) -> successor states, sorted."""
        table: dict[tuple[int, str], list[int]] = defaultdict(list)
        for p, a, q in self.transitions:
            table[p, a].append(q)
        return {key: tuple(sorted(qs)) for key, qs in table.items()}

    @cached_property
    def out(self) -> dict[int, tuple[tuple[str, int], ...]]:
        """state -> sorted (label, successor) pairs."""
        table: dict[int, list[tuple[str, int]]] = defaultdict(list)
        for p, a, q in self.transitions:
            table[p].append((a, q))
        return {p: tuple(sorted(v)) for p, v in table.items()}

    def step(self, states: Iterable[int], label: str) -> frozenset[int]:
        delta = self.delta
        return frozenset(q for p in states for q in delta.get((p, label), ()))


def _glushkov(r: RegExp, labels: list[str]):
    """Return (nullable, first, last, follow-pairs) with positions numbered from 1."""
    if isinstance(r, Epsilon):
        return True, frozenset(), frozenset(), set()
    if isinstance(r, Atom):
        labels.append(r.label)
        p = frozenset((len(labels),))
        return False, p, p, set()
    if isinstance(r, Star):
        _, first, last, follow = _glushkov(r.child, labels)
        follow |= {(p, q) for p in last for q in first}
        return True, first, last, follow
    n1, f1, l1, fo1 = _glushkov(r.left, labels)
    n2, f2, l2, fo2 = _glushkov(r.right, labels)
    if isinstance(r, Union):
        return n1 or n2, f1 | f2, l1 | l2, fo1 | fo2
    follow = fo1 | fo2 | {(p, q) for p in l1 for q in f2}
    first = f1 | f2 if n1 else f1
    last = l1 | l2 if n2 else l2
    return n1 and n2, first, last, follow


def to_nfa(r: RegExp) -> Nfa:
    """Position (Glushkov) automaton of ``r``: one state per atom occurrence plus
    the initial state, and no ε-transitions."""
    labels: list[str] = []
    nullable, first, last, follow = _glushkov(r, labels)
    trans = {(0, labels[q - 1], q) for q in first}
    trans |= {(p, labels[q - 1], q) for p, q in follow}
    finals = set(last)
    if nullable:
        finals.add(0)
    return Nfa(len(labels) + 1, 0, frozenset(finals), frozenset(trans), tuple(labels))


def accepts(n: Nfa, word: Iterable[str]) -> bool:
    states = frozenset((n.initial,))
    for a in word:
        states = n.step(states, a)
        if not states:
            return False
    return bool(states & n.finals)
