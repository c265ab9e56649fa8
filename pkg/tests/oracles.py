"""Independent reference implementations used as test oracles.

These deliberately avoid the library's search strategies: the universe is
rebuilt from binary combinations instead of composition pools, and the regex
reference matcher is plain exponential recursion over index assignments with
no memoization.
"""

from __future__ import annotations

import itertools

from splang.regexes import (
    Alt,
    AtomLit,
    Cat,
    ClosePar,
    CloseSeq,
    CloseSP,
    EMPTY,
    EPS_LIT,
    EmptySet,
    EpsLit,
    ParProd,
    Regex,
)
from splang.terms import (
    COMMUTATIVE,
    EPS,
    ORDERED,
    Eps,
    Leaf,
    Par,
    SemanticsMode,
    Seq,
    SPTerm,
    canonicalize,
    format_term,
    par,
    seq,
)


def binary_universe(alphabet, max_atoms: int, mode: SemanticsMode = ORDERED) -> tuple[SPTerm, ...]:
    """All canonical terms with <= max_atoms atoms, built by combining pairs
    of smaller terms with both operators and canonicalizing."""
    exact: dict[int, set[SPTerm]] = {0: {EPS}, 1: {Leaf(c) for c in sorted(alphabet)}}
    for n in range(2, max_atoms + 1):
        level: set[SPTerm] = set()
        for i in range(1, n):
            for x in exact[i]:
                for y in exact[n - i]:
                    level.add(canonicalize(seq(x, y), mode))
                    level.add(canonicalize(par(x, y), mode))
        exact[n] = level
    out: set[SPTerm] = set()
    for n in range(0, max_atoms + 1):
        out |= exact[n]
    return tuple(sorted(out, key=format_term))


# ---------------------------------------------------------------------------
# Reference regex matcher: direct definition, no memo, index-set splits.

def _seq_factors(t: SPTerm) -> tuple[SPTerm, ...]:
    if isinstance(t, Eps):
        return ()
    if isinstance(t, Seq):
        return t.children
    return (t,)


def _par_factors(t: SPTerm) -> tuple[SPTerm, ...]:
    if isinstance(t, Eps):
        return ()
    if isinstance(t, Par):
        return t.children
    return (t,)


def _cuts(n: int, k: int):
    """Index boundaries splitting range(n) into k contiguous segments."""
    for inner in itertools.combinations_with_replacement(range(n + 1), k - 1):
        yield (0,) + inner + (n,)


def naive_matches(r: Regex, t: SPTerm, mode: SemanticsMode = ORDERED) -> bool:
    t = canonicalize(t, mode)
    if isinstance(r, EmptySet):
        return False
    if isinstance(r, EpsLit):
        return isinstance(t, Eps)
    if isinstance(r, AtomLit):
        return isinstance(t, Leaf) and t.symbol == r.symbol
    if isinstance(r, Alt):
        return any(naive_matches(p, t, mode) for p in r.parts)
    if isinstance(r, Cat):
        factors = _seq_factors(t)
        k = len(r.parts)
        return any(
            all(
                naive_matches(p, seq(*factors[bounds[i] : bounds[i + 1]]), mode)
                for i, p in enumerate(r.parts)
            )
            for bounds in _cuts(len(factors), k)
        )
    if isinstance(r, ParProd):
        factors = _par_factors(t)
        k = len(r.parts)
        if mode is ORDERED:
            return any(
                all(
                    naive_matches(p, par(*factors[bounds[i] : bounds[i + 1]]), mode)
                    for i, p in enumerate(r.parts)
                )
                for bounds in _cuts(len(factors), k)
            )
        # assign every factor index to one of the k parts
        for assignment in itertools.product(range(k), repeat=len(factors)):
            groups = [[f for f, part in zip(factors, assignment) if part == i] for i in range(k)]
            if all(
                naive_matches(p, canonicalize(par(*group), mode), mode)
                for p, group in zip(r.parts, groups)
            ):
                return True
        return False
    if isinstance(r, CloseSeq):
        factors = _seq_factors(t)
        if not factors:
            return True
        for k in range(1, len(factors) + 1):
            for bounds in _cuts(len(factors), k):
                if any(bounds[i] == bounds[i + 1] for i in range(k)):
                    continue  # blocks are nonempty
                if all(
                    naive_matches(r.inner, seq(*factors[bounds[i] : bounds[i + 1]]), mode)
                    for i in range(k)
                ):
                    return True
        return False
    if isinstance(r, ClosePar):
        factors = _par_factors(t)
        if not factors:
            return True
        n = len(factors)
        if mode is ORDERED:
            for k in range(1, n + 1):
                for bounds in _cuts(n, k):
                    if any(bounds[i] == bounds[i + 1] for i in range(k)):
                        continue
                    if all(
                        naive_matches(r.inner, par(*factors[bounds[i] : bounds[i + 1]]), mode)
                        for i in range(k)
                    ):
                        return True
            return False
        for k in range(1, n + 1):
            for assignment in itertools.product(range(k), repeat=n):
                if set(assignment) != set(range(k)):
                    continue  # blocks are nonempty
                groups = [[f for f, part in zip(factors, assignment) if part == i] for i in range(k)]
                if all(
                    naive_matches(r.inner, canonicalize(par(*group), mode), mode)
                    for group in groups
                ):
                    return True
        return False
    if isinstance(r, CloseSP):
        return naive_matches(CloseSeq(r.inner), t, mode) or naive_matches(
            ClosePar(r.inner), t, mode
        )
    raise TypeError(f"not a regex: {r!r}")


# ---------------------------------------------------------------------------
# Exhaustive regex AST enumeration (canonical shapes only).

def all_regexes(alphabet=("a", "b"), max_nodes: int = 4) -> list[Regex]:
    by_size: dict[int, list[Regex]] = {
        1: [EMPTY, EPS_LIT] + [AtomLit(c) for c in sorted(alphabet)]
    }
    for size in range(2, max_nodes + 1):
        level: list[Regex] = []
        for inner in by_size[size - 1]:
            level.extend((CloseSeq(inner), ClosePar(inner), CloseSP(inner)))
        for k in range(2, size):
            for comp in _positive_compositions(size - 1, k):
                for combo in itertools.product(*(by_size[c] for c in comp)):
                    for cls in (Cat, Alt, ParProd):
                        if any(isinstance(child, cls) for child in combo):
                            continue  # flattened-associativity invariant
                        level.append(cls(tuple(combo)))
        by_size[size] = level
    return [r for size in range(1, max_nodes + 1) for r in by_size[size]]


def _positive_compositions(total: int, k: int):
    if k == 1:
        yield (total,)
        return
    for head in range(1, total - k + 2):
        for rest in _positive_compositions(total - head, k - 1):
            yield (head,) + rest
