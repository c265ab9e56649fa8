"""Grammars whose right-hand sides are series-parallel forms over mixed symbols.

A sentential form reuses the term algebra with uppercase leaves standing for
nonterminals and lowercase leaves for terminals. Classification recognises the
linear production shapes (right-linear x.B, left-linear B.x, parallel-linear
x||B / B||x with x a parallel word of terminals, and terminal productions),
plus the grammar-wide families: no-Seq right-hand sides (context-free
parallel) and the fully linear classes.

Grammar file format: one ``A -> alt1 | alt2 | ...`` rule per line, ``#``
comments, uppercase letters are nonterminals, ``eps`` allowed, start symbol is
the first rule's left-hand side. ``||`` is the parallel operator and binds
looser than ``.``; a single ``|`` separates alternatives and may not appear
inside parentheses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from ._lex import TokenStream
from .errors import EnumerationCapError, TermSyntaxError
from .terms import (
    DEFAULT_CAP,
    EPS,
    ORDERED,
    Eps,
    Leaf,
    Par,
    SemanticsMode,
    SPTerm,
    Seq,
    _parse_par,
    atoms_count,
    canonicalize,
    format_term,
    par,
    seq,
)
from .langs import FiniteLang


@dataclass(frozen=True)
class Production:
    lhs: str
    rhs: SPTerm  # canonical sentential form

    def __post_init__(self):
        if len(self.lhs) != 1 or not self.lhs.isupper():
            raise ValueError(f"nonterminal must be a single uppercase letter, got {self.lhs!r}")

    def __repr__(self) -> str:
        return f"{self.lhs} -> {format_term(self.rhs)}"


@dataclass(frozen=True)
class Grammar:
    nonterminals: frozenset[str]
    terminals: frozenset[str]
    productions: tuple[Production, ...]
    start: str

    def __post_init__(self):
        if not self.productions:
            raise ValueError("a grammar needs at least one production")
        if self.start not in self.nonterminals:
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        for p in self.productions:
            if p.lhs not in self.nonterminals:
                raise ValueError(f"production head {p.lhs!r} not declared")
            for s in symbols_of(p.rhs):
                if s.isupper() and s not in self.nonterminals:
                    raise ValueError(f"undeclared nonterminal {s!r} in {p!r}")
                if s.islower() and s not in self.terminals:
                    raise ValueError(f"undeclared terminal {s!r} in {p!r}")
        by_lhs: dict[str, list[SPTerm]] = {}
        for p in self.productions:
            by_lhs.setdefault(p.lhs, []).append(p.rhs)
        object.__setattr__(self, "_by_lhs", by_lhs)

    @staticmethod
    def of(productions, start: str | None = None) -> "Grammar":
        """Build a grammar inferring V from heads and T from used terminals."""
        prods = tuple(productions)
        if not prods:
            raise ValueError("a grammar needs at least one production")
        heads = frozenset(p.lhs for p in prods)
        used_terminals = frozenset(
            s for p in prods for s in symbols_of(p.rhs) if s.islower()
        )
        return Grammar(heads, used_terminals, prods, start or prods[0].lhs)

    def alternatives(self, nonterminal: str) -> list[SPTerm]:
        return self._by_lhs.get(nonterminal, [])


def symbols_of(form: SPTerm):
    """Leaf symbols of a sentential form, left to right."""
    if isinstance(form, Eps):
        return
    if isinstance(form, Leaf):
        yield form.symbol
        return
    for c in form.children:
        yield from symbols_of(c)


def parse_grammar(text: str) -> Grammar:
    """Parse the grammar file format. The first rule's head is the start."""
    productions: list[Production] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, arrow, body = line.partition("->")
        if not arrow:
            raise TermSyntaxError(f"line {lineno}: expected 'A -> ...'")
        lhs = head.strip()
        if len(lhs) != 1 or not lhs.isupper():
            raise TermSyntaxError(f"line {lineno}: rule head must be a single uppercase letter, got {lhs!r}")
        try:
            for rhs in _parse_alternatives(body):
                productions.append(Production(lhs, canonicalize(rhs)))
        except TermSyntaxError as exc:
            raise TermSyntaxError(f"line {lineno}: {exc}") from exc
    if not productions:
        raise TermSyntaxError("grammar file has no productions")
    try:
        return Grammar.of(productions)
    except ValueError as exc:
        raise TermSyntaxError(str(exc)) from exc


def _parse_alternatives(body: str) -> list[SPTerm]:
    stream = TokenStream(body)
    alternatives = [_parse_par(stream, allow_upper=True)]
    while stream.eat_op("|"):
        alternatives.append(_parse_par(stream, allow_upper=True))
    stream.expect_end()
    return alternatives


def format_grammar(g: Grammar) -> str:
    """Deterministic grammar text: heads in first-appearance order, start first."""
    order: list[str] = []
    for p in g.productions:
        if p.lhs not in order:
            order.append(p.lhs)
    lines = []
    for lhs in order:
        alts = " | ".join(format_term(rhs) for rhs in g.alternatives(lhs))
        lines.append(f"{lhs} -> {alts}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Classification

class ProductionShape(Enum):
    RIGHT_LINEAR = "RIGHT_LINEAR"  # a1...ak . B
    LEFT_LINEAR = "LEFT_LINEAR"  # B . a1...ak
    PARALLEL_LINEAR = "PARALLEL_LINEAR"  # x || B or B || x, x a parallel terminal word
    TERMINAL = "TERMINAL"  # rhs has no nonterminal (eps included)


def _is_terminal_form(form: SPTerm) -> bool:
    return not any(s.isupper() for s in symbols_of(form))


def _is_terminal_seq_word(form: SPTerm) -> bool:
    """Member of T* (or eps): terminals composed sequentially only."""
    if isinstance(form, Eps):
        return True
    if isinstance(form, Leaf):
        return form.symbol.islower()
    if isinstance(form, Seq):
        return all(isinstance(c, Leaf) and c.symbol.islower() for c in form.children)
    return False


def _is_terminal_par_word(form: SPTerm) -> bool:
    """Member of T^(parallel) (or eps): terminals composed in parallel only."""
    if isinstance(form, Eps):
        return True
    if isinstance(form, Leaf):
        return form.symbol.islower()
    if isinstance(form, Par):
        return all(isinstance(c, Leaf) and c.symbol.islower() for c in form.children)
    return False


def _is_nt_leaf(form: SPTerm) -> bool:
    return isinstance(form, Leaf) and form.symbol.isupper()


def production_shapes(rhs: SPTerm) -> frozenset[ProductionShape]:
    """Which linear/terminal shapes the right-hand side satisfies."""
    shapes = set()
    if _is_terminal_form(rhs):
        shapes.add(ProductionShape.TERMINAL)
    if isinstance(rhs, Seq):
        head, tail = rhs.children[0], rhs.children[-1]
        body_first = rhs.children[1:]
        body_last = rhs.children[:-1]
        if _is_nt_leaf(tail) and all(isinstance(c, Leaf) and c.symbol.islower() for c in body_last):
            shapes.add(ProductionShape.RIGHT_LINEAR)
        if _is_nt_leaf(head) and all(isinstance(c, Leaf) and c.symbol.islower() for c in body_first):
            shapes.add(ProductionShape.LEFT_LINEAR)
    if isinstance(rhs, Par):
        head, tail = rhs.children[0], rhs.children[-1]
        if _is_nt_leaf(tail) and all(isinstance(c, Leaf) and c.symbol.islower() for c in rhs.children[:-1]):
            shapes.add(ProductionShape.PARALLEL_LINEAR)
        elif _is_nt_leaf(head) and all(isinstance(c, Leaf) and c.symbol.islower() for c in rhs.children[1:]):
            shapes.add(ProductionShape.PARALLEL_LINEAR)
    return frozenset(shapes)


def _has_seq_node(form: SPTerm) -> bool:
    if isinstance(form, Seq):
        return True
    if isinstance(form, Par):
        return any(_has_seq_node(c) for c in form.children)
    return False


def _has_par_node(form: SPTerm) -> bool:
    if isinstance(form, Par):
        return True
    if isinstance(form, Seq):
        return any(_has_par_node(c) for c in form.children)
    return False


# flag print order used by the CLI and reports
FLAG_ORDER = (
    "RIGHT_LINEAR",
    "LEFT_LINEAR",
    "PARALLEL_LINEAR",
    "SP_REGULAR",
    "CF_SEQUENTIAL",
    "CF_PARALLEL",
    "CF_SP",
)


@dataclass(frozen=True)
class GrammarClass:
    """Grammar-level families plus the shape set of each production."""

    right_linear: bool
    left_linear: bool
    parallel_linear: bool
    sp_regular: bool
    cf_sequential: bool
    cf_parallel: bool
    cf_sp: bool
    shapes: tuple[frozenset[ProductionShape], ...]

    def flags(self) -> tuple[str, ...]:
        present = {
            "RIGHT_LINEAR": self.right_linear,
            "LEFT_LINEAR": self.left_linear,
            "PARALLEL_LINEAR": self.parallel_linear,
            "SP_REGULAR": self.sp_regular,
            "CF_SEQUENTIAL": self.cf_sequential,
            "CF_PARALLEL": self.cf_parallel,
            "CF_SP": self.cf_sp,
        }
        return tuple(name for name in FLAG_ORDER if present[name])


def classify_grammar(g: Grammar) -> GrammarClass:
    """Shape-test every production and fold into grammar-level families.

    A grammar is right-/left-/parallel-linear when every production either
    has that linear shape or is a terminal production whose word fits the
    family (sequential word for right/left, parallel word for the parallel
    family; eps fits all three). SP_REGULAR asks only that each production
    has some linear shape or is terminal.
    """
    shapes = tuple(production_shapes(p.rhs) for p in g.productions)

    def linear_family(shape: ProductionShape, terminal_ok) -> bool:
        return all(
            shape in s or (ProductionShape.TERMINAL in s and terminal_ok(p.rhs))
            for s, p in zip(shapes, g.productions)
        )

    right = linear_family(ProductionShape.RIGHT_LINEAR, _is_terminal_seq_word)
    left = linear_family(ProductionShape.LEFT_LINEAR, _is_terminal_seq_word)
    parallel = linear_family(ProductionShape.PARALLEL_LINEAR, _is_terminal_par_word)
    sp_regular = all(s for s in shapes)
    cf_parallel = all(not _has_seq_node(p.rhs) for p in g.productions)
    cf_sequential = all(not _has_par_node(p.rhs) for p in g.productions)
    return GrammarClass(
        right_linear=right,
        left_linear=left,
        parallel_linear=parallel,
        sp_regular=sp_regular,
        cf_sequential=cf_sequential,
        cf_parallel=cf_parallel,
        cf_sp=True,
        shapes=shapes,
    )


# ---------------------------------------------------------------------------
# Bounded generation and membership

def _terminal_atoms(form: SPTerm) -> int:
    return sum(1 for s in symbols_of(form) if s.islower())


def _leftmost_nonterminal(form: SPTerm) -> tuple[tuple[int, ...], str] | None:
    """Path and symbol of the first nonterminal leaf in serialization order."""
    if isinstance(form, Leaf):
        return ((), form.symbol) if form.symbol.isupper() else None
    if isinstance(form, (Seq, Par)):
        for i, child in enumerate(form.children):
            found = _leftmost_nonterminal(child)
            if found is not None:
                path, sym = found
                return ((i,) + path, sym)
    return None


def _replace_at(form: SPTerm, path: tuple[int, ...], replacement: SPTerm) -> SPTerm:
    if not path:
        return replacement
    children = list(form.children)
    children[path[0]] = _replace_at(children[path[0]], path[1:], replacement)
    rebuild = seq if isinstance(form, Seq) else par
    return rebuild(*children)


def _derive(
    g: Grammar,
    max_atoms: int,
    max_steps: int,
    mode: SemanticsMode,
    cap: int,
    target: SPTerm | None = None,
):
    """Breadth-first leftmost derivation. Returns (words, parents).

    Sentential forms are canonical for `mode`; forms whose terminal-atom
    count exceeds max_atoms are pruned (that count never decreases). When
    `target` is given the search stops as soon as it is reached.
    """
    start = canonicalize(Leaf(g.start), mode)
    parents: dict[SPTerm, SPTerm | None] = {start: None}
    words: set[SPTerm] = set()
    frontier = [start]
    for _ in range(max_steps):
        if not frontier or (target is not None and target in words):
            break
        next_frontier: list[SPTerm] = []
        for form in frontier:
            site = _leftmost_nonterminal(form)
            if site is None:
                continue
            path, nt = site
            for rhs in g.alternatives(nt):
                new = canonicalize(_replace_at(form, path, rhs), mode)
                if _terminal_atoms(new) > max_atoms:
                    continue
                if new in parents:
                    continue
                parents[new] = form
                if len(parents) > cap:
                    raise EnumerationCapError(
                        f"derivation frontier exceeds the cardinality cap ({cap})"
                    )
                if _leftmost_nonterminal(new) is None:
                    words.add(new)
                else:
                    next_frontier.append(new)
        frontier = next_frontier
    return words, parents


def generate(
    g: Grammar,
    max_atoms: int,
    max_steps: int,
    mode: SemanticsMode = ORDERED,
    cap: int = DEFAULT_CAP,
) -> FiniteLang:
    """All fully terminal words derivable from the start symbol within the
    step budget and with at most max_atoms terminal atoms."""
    words, _ = _derive(g, max_atoms, max_steps, mode, cap)
    return FiniteLang.of(words, mode)


DEFAULT_STEP_FACTOR = 4
DEFAULT_STEP_OFFSET = 8


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    trace: tuple[SPTerm, ...] | None  # sentential forms, start first

    def __bool__(self) -> bool:
        return self.member


def is_member(
    g: Grammar,
    t: SPTerm,
    mode: SemanticsMode = ORDERED,
    step_factor: int = DEFAULT_STEP_FACTOR,
    step_offset: int = DEFAULT_STEP_OFFSET,
    cap: int = DEFAULT_CAP,
) -> MembershipResult:
    """Bounded membership: does `t` appear in the derivations of `g` within
    the documented step budget (step_factor * atoms + step_offset)?

    This is a semi-decision relative to the budget: a True answer comes with
    a derivation trace; False means not derivable within the budget.
    """
    target = canonicalize(t, mode)
    budget = step_factor * atoms_count(target) + step_offset
    words, parents = _derive(g, atoms_count(target), budget, mode, cap, target=target)
    if target not in words:
        return MembershipResult(False, None)
    chain: list[SPTerm] = []
    node: SPTerm | None = target
    while node is not None:
        chain.append(node)
        node = parents[node]
    chain.reverse()
    return MembershipResult(True, tuple(chain))


# ---------------------------------------------------------------------------
# Seeded fixture grammars

def random_parallel_linear_grammar(
    seed: int,
    alphabet: tuple[str, ...] = ("a", "b"),
    max_nonterminals: int = 3,
    max_productions_per_nt: int = 3,
) -> Grammar:
    """A small random grammar in the parallel-linear class, deterministic in
    `seed`. Used to fan out the grammar/automaton equivalence checks."""
    rng = random.Random(seed)
    names = ["S", "A", "B"][: rng.randint(1, max_nonterminals)]
    productions: list[Production] = []
    for name in names:
        for _ in range(rng.randint(1, max_productions_per_nt)):
            roll = rng.random()
            if roll < 0.2:
                rhs: SPTerm = EPS
            else:
                word = par(*(Leaf(rng.choice(alphabet)) for _ in range(rng.randint(1, 3))))
                if roll < 0.6:
                    rhs = word
                else:
                    cont = Leaf(rng.choice(names))
                    rhs = par(word, cont) if rng.random() < 0.5 else par(cont, word)
            productions.append(Production(name, canonicalize(rhs)))
    return Grammar.of(productions, start="S" if "S" in names else names[0])
