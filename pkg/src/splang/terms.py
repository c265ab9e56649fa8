"""Series-parallel terms.

A term is built from single-letter atoms with two associative operators:
sequential composition (written ``.``) and parallel composition (written
``||``), plus the empty word ``eps`` which is the identity of both. Terms are
kept in a canonical form:

* ``Seq``/``Par`` nodes are flattened (no same-kind direct child), have at
  least two children, and never contain ``eps``;
* in COMMUTATIVE mode the children of every ``Par`` node are additionally
  sorted, so parallel composition is order-blind.

Lowercase leaves are alphabet atoms. Uppercase leaves are reserved for the
grammar layer, which reuses this algebra for sentential forms.

Text format (whitespace ignored, ``.`` binds tighter than ``||``)::

    term := par ;  par := seq { "||" seq } ;  seq := prim { "." prim } ;
    prim := letter | "eps" | "(" term ")"
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from ._lex import TokenStream
from .errors import EnumerationCapError, TermSyntaxError


class SemanticsMode(Enum):
    """How parallel composition is compared: order-sensitive or multiset."""

    ORDERED = "ordered"
    COMMUTATIVE = "commutative"


ORDERED = SemanticsMode.ORDERED
COMMUTATIVE = SemanticsMode.COMMUTATIVE


class SPTerm:
    """Base class of term nodes. Instances are immutable and hashable."""

    __slots__ = ()

    def __repr__(self) -> str:
        return format_term(self)


@dataclass(frozen=True, repr=False)
class Eps(SPTerm):
    """The empty word; identity of both compositions, length = depth = 0."""


EPS = Eps()


@dataclass(frozen=True, repr=False)
class Leaf(SPTerm):
    symbol: str

    def __post_init__(self):
        if len(self.symbol) != 1 or not (self.symbol.isascii() and self.symbol.isalpha()):
            raise ValueError(f"leaf symbol must be a single letter, got {self.symbol!r}")


@dataclass(frozen=True, repr=False)
class Seq(SPTerm):
    children: tuple[SPTerm, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Seq needs at least two children")
        if any(isinstance(c, (Seq, Eps)) for c in self.children):
            raise ValueError("Seq children must be flattened and eps-free")


@dataclass(frozen=True, repr=False)
class Par(SPTerm):
    children: tuple[SPTerm, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Par needs at least two children")
        if any(isinstance(c, (Par, Eps)) for c in self.children):
            raise ValueError("Par children must be flattened and eps-free")


def seq(*parts: SPTerm) -> SPTerm:
    """Sequential composition with flattening, eps removal, and collapsing."""
    flat: list[SPTerm] = []
    for p in parts:
        if isinstance(p, Eps):
            continue
        if isinstance(p, Seq):
            flat.extend(p.children)
        else:
            flat.append(p)
    if not flat:
        return EPS
    if len(flat) == 1:
        return flat[0]
    return Seq(tuple(flat))


def par(*parts: SPTerm) -> SPTerm:
    """Parallel composition with flattening, eps removal, and collapsing.

    Does not sort; use canonicalize(..., COMMUTATIVE) for the multiset form.
    """
    flat: list[SPTerm] = []
    for p in parts:
        if isinstance(p, Eps):
            continue
        if isinstance(p, Par):
            flat.extend(p.children)
        else:
            flat.append(p)
    if not flat:
        return EPS
    if len(flat) == 1:
        return flat[0]
    return Par(tuple(flat))


def canonicalize(t: SPTerm, mode: SemanticsMode = ORDERED) -> SPTerm:
    """Rebuild `t` bottom-up into canonical form for `mode`. Idempotent."""
    if isinstance(t, (Eps, Leaf)):
        return t
    if isinstance(t, Seq):
        return seq(*(canonicalize(c, mode) for c in t.children))
    result = par(*(canonicalize(c, mode) for c in t.children))
    if mode is COMMUTATIVE and isinstance(result, Par):
        return Par(tuple(sorted(result.children, key=format_term)))
    return result


@functools.lru_cache(maxsize=None)
def format_term(t: SPTerm) -> str:
    """Minimal-parenthesization text for `t`; also the canonical sort key."""
    if isinstance(t, Eps):
        return "eps"
    if isinstance(t, Leaf):
        return t.symbol
    if isinstance(t, Seq):
        return ".".join(
            f"({format_term(c)})" if isinstance(c, Par) else format_term(c)
            for c in t.children
        )
    if isinstance(t, Par):
        # children are leaves or Seq; "." binds tighter, so no parens needed
        return "||".join(format_term(c) for c in t.children)
    raise TypeError(f"not a term: {t!r}")


def term_key(t: SPTerm) -> str:
    """Total order on canonical terms: lexicographic on the formatted text."""
    return format_term(t)


def parse_term(text: str, *, allow_upper: bool = False) -> SPTerm:
    """Parse the term text format into a canonical ORDERED-mode term.

    Uppercase leaves are rejected unless `allow_upper` is set (the grammar
    layer sets it to parse sentential forms).
    """
    stream = TokenStream(text)
    result = _parse_par(stream, allow_upper)
    stream.expect_end()
    return result


def _parse_par(stream: TokenStream, allow_upper: bool) -> SPTerm:
    parts = [_parse_seq(stream, allow_upper)]
    while stream.eat_op("||"):
        parts.append(_parse_seq(stream, allow_upper))
    return par(*parts)


def _parse_seq(stream: TokenStream, allow_upper: bool) -> SPTerm:
    parts = [_parse_prim(stream, allow_upper)]
    while stream.eat_op("."):
        parts.append(_parse_prim(stream, allow_upper))
    return seq(*parts)


def _parse_prim(stream: TokenStream, allow_upper: bool) -> SPTerm:
    tok = stream.peek()
    if tok.kind == "LETTER":
        if tok.text.isupper() and not allow_upper:
            raise TermSyntaxError(f"uppercase letter {tok.text!r} not allowed in a plain term", tok.offset)
        stream.next()
        return Leaf(tok.text)
    if tok.kind == "EPS":
        stream.next()
        return EPS
    if stream.eat_op("("):
        inner = _parse_par(stream, allow_upper)
        stream.expect_op(")")
        return inner
    raise TermSyntaxError(f"expected a letter, 'eps' or '(', found {tok.text or 'end of input'!r}", tok.offset)


def length(t: SPTerm) -> int:
    """Sequential extent: atoms count 1, Seq sums, Par takes the max."""
    if isinstance(t, Eps):
        return 0
    if isinstance(t, Leaf):
        return 1
    if isinstance(t, Seq):
        return sum(length(c) for c in t.children)
    return max(length(c) for c in t.children)


def depth(t: SPTerm) -> int:
    """Parallel width: atoms count 1, Seq takes the max, Par sums."""
    if isinstance(t, Eps):
        return 0
    if isinstance(t, Leaf):
        return 1
    if isinstance(t, Seq):
        return max(depth(c) for c in t.children)
    return sum(depth(c) for c in t.children)


def atoms_count(t: SPTerm) -> int:
    if isinstance(t, Eps):
        return 0
    if isinstance(t, Leaf):
        return 1
    return sum(atoms_count(c) for c in t.children)


def atoms_multiset(t: SPTerm) -> Counter[str]:
    """Leaf symbols with multiplicity."""
    if isinstance(t, Eps):
        return Counter()
    if isinstance(t, Leaf):
        return Counter([t.symbol])
    acc: Counter[str] = Counter()
    for c in t.children:
        acc.update(atoms_multiset(c))
    return acc


def reverse_term(t: SPTerm) -> SPTerm:
    """Mirror the sequential structure: Seq children are reversed (and each
    reversed recursively); Par children keep their order. An involution that
    preserves both length and depth."""
    if isinstance(t, (Eps, Leaf)):
        return t
    if isinstance(t, Seq):
        return Seq(tuple(reverse_term(c) for c in reversed(t.children)))
    return Par(tuple(reverse_term(c) for c in t.children))


class TermClass(Enum):
    SEQUENTIAL = "SEQUENTIAL"
    PARALLEL = "PARALLEL"
    MIXED = "MIXED"


def is_sequential_word(t: SPTerm) -> bool:
    """True iff `t` contains no parallel composition (a plain word or eps)."""
    if isinstance(t, (Eps, Leaf)):
        return True
    if isinstance(t, Par):
        return False
    return all(is_sequential_word(c) for c in t.children)


def is_parallel_word(t: SPTerm) -> bool:
    """True iff `t` is eps, an atom, or a flat parallel bunch of atoms."""
    if isinstance(t, (Eps, Leaf)):
        return True
    if isinstance(t, Par):
        return all(isinstance(c, Leaf) for c in t.children)
    return False


def classify_term(t: SPTerm) -> TermClass:
    """Single-valued classification. Atoms and eps are both sequential and
    parallel words; this form prefers SEQUENTIAL for them (use the
    is_*_word predicates when the distinction matters)."""
    if is_sequential_word(t):
        return TermClass.SEQUENTIAL
    if is_parallel_word(t):
        return TermClass.PARALLEL
    return TermClass.MIXED


DEFAULT_CAP = 200_000


def enumerate_terms(
    alphabet,
    max_atoms: int,
    mode: SemanticsMode = ORDERED,
    cap: int = DEFAULT_CAP,
) -> tuple[SPTerm, ...]:
    """Every canonical term (for `mode`) with at most `max_atoms` atom
    occurrences, eps included, sorted by the canonical order.

    This is the brute-force universe that the bounded checks elsewhere
    filter. Raises EnumerationCapError when more than `cap` terms would be
    produced.
    """
    letters = tuple(sorted(set(alphabet)))
    for c in letters:
        if len(c) != 1 or not ("a" <= c <= "z"):
            raise ValueError(f"alphabet entries must be lowercase letters, got {c!r}")
    if max_atoms < 0:
        raise ValueError("max_atoms must be >= 0")
    return _enumerate_cached(letters, max_atoms, mode, cap)


@functools.lru_cache(maxsize=64)
def _enumerate_cached(
    letters: tuple[str, ...],
    max_atoms: int,
    mode: SemanticsMode,
    cap: int,
) -> tuple[SPTerm, ...]:
    out: list[SPTerm] = [EPS]
    # pools of terms with exactly n atoms, split by top constructor
    non_seq: dict[int, list[SPTerm]] = {}  # atoms and Par terms: legal Seq children
    non_par: dict[int, list[SPTerm]] = {}  # atoms and Seq terms: legal Par children
    for n in range(1, max_atoms + 1):
        if n == 1:
            atoms: list[SPTerm] = [Leaf(c) for c in letters]
            seq_terms: list[SPTerm] = []
            par_terms: list[SPTerm] = []
        else:
            atoms = []
            seq_terms = [
                Seq(tuple(combo))
                for parts in _compositions(n)
                for combo in itertools.product(*(non_seq[k] for k in parts))
            ]
            if mode is ORDERED:
                par_terms = [
                    Par(tuple(combo))
                    for parts in _compositions(n)
                    for combo in itertools.product(*(non_par[k] for k in parts))
                ]
            else:
                seen = {
                    tuple(sorted(combo, key=format_term))
                    for parts in _compositions(n)
                    for combo in itertools.product(*(non_par[k] for k in parts))
                }
                par_terms = [Par(children) for children in seen]
        non_seq[n] = atoms + par_terms
        non_par[n] = atoms + seq_terms
        out.extend(atoms)
        out.extend(seq_terms)
        out.extend(par_terms)
        if len(out) > cap:
            raise EnumerationCapError(
                f"term universe exceeds the cardinality cap ({cap}) at {n} atoms"
            )
    out.sort(key=format_term)
    return tuple(out)


def _compositions(n: int):
    """Ordered splits of n into at least two positive parts."""

    def go(remaining: int, acc: list[int]):
        if remaining == 0:
            if len(acc) >= 2:
                yield tuple(acc)
            return
        for k in range(1, remaining + 1):
            acc.append(k)
            yield from go(remaining - k, acc)
            acc.pop()

    yield from go(n, [])
