"""Finite languages of series-parallel terms.

A FiniteLang is a deterministic, duplicate-free, sorted set of canonical
terms together with the semantics mode its members are canonical for. All
operations here are total on finite languages; the three Kleene closures are
truncated at an explicit repetition bound and never claim anything about the
infinite closure.

Language file format: a ``mode: ordered|commutative`` header, then one term
per line in the term text format. ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import ModeMismatchError, TermSyntaxError
from .terms import (
    COMMUTATIVE,
    EPS,
    ORDERED,
    DEFAULT_CAP,
    SemanticsMode,
    SPTerm,
    canonicalize,
    enumerate_terms,
    format_term,
    parse_term,
    par,
    reverse_term,
    seq,
)


@dataclass(frozen=True)
class FiniteLang:
    mode: SemanticsMode
    terms: tuple[SPTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.terms))

    @staticmethod
    def of(terms: Iterable[SPTerm], mode: SemanticsMode = ORDERED) -> "FiniteLang":
        """Canonicalize, deduplicate, and sort `terms` into a language."""
        canon = {canonicalize(t, mode) for t in terms}
        return FiniteLang(mode, tuple(sorted(canon, key=format_term)))

    @staticmethod
    def parse(texts: Iterable[str], mode: SemanticsMode = ORDERED) -> "FiniteLang":
        return FiniteLang.of((parse_term(s) for s in texts), mode)

    def __iter__(self) -> Iterator[SPTerm]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, t: SPTerm) -> bool:
        return canonicalize(t, self.mode) in self._members

    def __repr__(self) -> str:
        body = ", ".join(format_term(t) for t in self.terms)
        return f"FiniteLang({self.mode.value}, {{{body}}})"


def _require_same_mode(l1: FiniteLang, l2: FiniteLang) -> SemanticsMode:
    if l1.mode is not l2.mode:
        raise ModeMismatchError(f"cannot combine {l1.mode.value} and {l2.mode.value} languages")
    return l1.mode


def concat_lang(l1: FiniteLang, l2: FiniteLang) -> FiniteLang:
    """All pairwise sequential products x.y for x in l1, y in l2."""
    mode = _require_same_mode(l1, l2)
    return FiniteLang.of((seq(x, y) for x in l1 for y in l2), mode)


def par_lang(l1: FiniteLang, l2: FiniteLang) -> FiniteLang:
    """All pairwise parallel products x||y for x in l1, y in l2."""
    mode = _require_same_mode(l1, l2)
    return FiniteLang.of((par(x, y) for x in l1 for y in l2), mode)


def union_lang(l1: FiniteLang, l2: FiniteLang) -> FiniteLang:
    mode = _require_same_mode(l1, l2)
    return FiniteLang.of(l1.terms + l2.terms, mode)


class PowerKind(Enum):
    SEQ = "seq"
    PAR = "par"


class ClosureKind(Enum):
    STAR = "star"  # union of sequential powers
    PAR_PLUS = "par"  # union of parallel powers
    SP = "sp"  # both unions together


def epsilon_lang(mode: SemanticsMode = ORDERED) -> FiniteLang:
    return FiniteLang(mode, (EPS,))


def power(lang: FiniteLang, n: int, kind: PowerKind) -> FiniteLang:
    """n-fold repetition of `lang` under the chosen operator; n=0 gives {eps}."""
    if n < 0:
        raise ValueError("power exponent must be >= 0")
    combine = concat_lang if kind is PowerKind.SEQ else par_lang
    acc = epsilon_lang(lang.mode)
    for _ in range(n):
        acc = combine(acc, lang)
    return acc


def kleene_bounded(lang: FiniteLang, kind: ClosureKind, n_max: int) -> FiniteLang:
    """Union of the 0..n_max powers of `lang`.

    STAR unions sequential powers, PAR_PLUS parallel powers, and SP is the
    union of both at the same bound. Monotone in n_max.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if kind is ClosureKind.SP:
        return union_lang(
            kleene_bounded(lang, ClosureKind.STAR, n_max),
            kleene_bounded(lang, ClosureKind.PAR_PLUS, n_max),
        )
    combine = concat_lang if kind is ClosureKind.STAR else par_lang
    out = epsilon_lang(lang.mode)
    level = epsilon_lang(lang.mode)
    for _ in range(n_max):
        level = combine(level, lang)
        out = union_lang(out, level)
    return out


def reverse_lang(lang: FiniteLang) -> FiniteLang:
    """Element-wise reversal, re-sorted. An involution."""
    return FiniteLang.of((reverse_term(t) for t in lang), lang.mode)


@dataclass(frozen=True)
class LangDiff:
    """Result of comparing two languages: truthy iff they are equal."""

    equal: bool
    only_left: tuple[SPTerm, ...]
    only_right: tuple[SPTerm, ...]

    def __bool__(self) -> bool:
        return self.equal

    def report(self, max_witnesses: int = 20) -> str:
        if self.equal:
            return "languages are equal"
        lines = []
        budget = max_witnesses
        for label, members in (("only in left", self.only_left), ("only in right", self.only_right)):
            for t in members[:budget]:
                lines.append(f"{label}: {format_term(t)}")
            shown = min(len(members), budget)
            budget -= shown
            if len(members) > shown:
                lines.append(f"{label}: ... and {len(members) - shown} more")
        return "\n".join(lines)


def lang_equal(l1: FiniteLang, l2: FiniteLang) -> LangDiff:
    """Set equality with a symmetric-difference report on failure."""
    _require_same_mode(l1, l2)
    left = set(l1.terms)
    right = set(l2.terms)
    if left == right:
        return LangDiff(True, (), ())
    only_left = tuple(sorted(left - right, key=format_term))
    only_right = tuple(sorted(right - left, key=format_term))
    return LangDiff(False, only_left, only_right)


def universe(
    alphabet,
    max_atoms: int,
    mode: SemanticsMode = ORDERED,
    cap: int = DEFAULT_CAP,
) -> FiniteLang:
    """The full bounded term universe as a language (see enumerate_terms)."""
    return FiniteLang(mode, enumerate_terms(alphabet, max_atoms, mode, cap))


_MODE_NAMES = {"ordered": ORDERED, "commutative": COMMUTATIVE}


def load_lang(text: str) -> FiniteLang:
    """Parse the language file format."""
    mode: SemanticsMode | None = None
    terms: list[SPTerm] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if mode is None:
            if not line.startswith("mode:"):
                raise TermSyntaxError(f"line {lineno}: language file must start with a 'mode:' header")
            name = line.split(":", 1)[1].strip()
            if name not in _MODE_NAMES:
                raise TermSyntaxError(f"line {lineno}: unknown mode {name!r}")
            mode = _MODE_NAMES[name]
            continue
        try:
            terms.append(parse_term(line))
        except TermSyntaxError as exc:
            raise TermSyntaxError(f"line {lineno}: {exc}") from exc
    if mode is None:
        raise TermSyntaxError("language file is missing the 'mode:' header")
    return FiniteLang.of(terms, mode)


def dump_lang(lang: FiniteLang) -> str:
    lines = [f"mode: {lang.mode.value}"]
    lines.extend(format_term(t) for t in lang.terms)
    return "\n".join(lines) + "\n"
