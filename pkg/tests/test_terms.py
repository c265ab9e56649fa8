import pytest
from hypothesis import given, strategies as st

from splang.errors import EnumerationCapError, TermSyntaxError
from splang.terms import (
    COMMUTATIVE,
    EPS,
    ORDERED,
    Eps,
    Leaf,
    Par,
    Seq,
    TermClass,
    atoms_count,
    atoms_multiset,
    canonicalize,
    classify_term,
    depth,
    enumerate_terms,
    format_term,
    is_parallel_word,
    is_sequential_word,
    length,
    par,
    parse_term,
    reverse_term,
    seq,
)

from oracles import binary_universe


def pt(text: str):
    return parse_term(text)


# ---------------------------------------------------------------------------
# parsing and printing

@pytest.mark.parametrize(
    "text,expected",
    [
        ("a.b", Seq((Leaf("a"), Leaf("b")))),
        ("(a||b).a", Seq((Par((Leaf("a"), Leaf("b"))), Leaf("a")))),
        ("a.(b.c)", Seq((Leaf("a"), Leaf("b"), Leaf("c")))),
        ("eps || a", Leaf("a")),
        ("eps", EPS),
        ("a", Leaf("a")),
        ("a||b||c", Par((Leaf("a"), Leaf("b"), Leaf("c")))),
    ],
)
def test_parse_term(text, expected):
    assert pt(text) == expected


@pytest.mark.parametrize(
    "term,expected",
    [
        (Seq((Par((Leaf("a"), Leaf("b"))), Leaf("a"))), "(a||b).a"),
        (Leaf("a"), "a"),
        (EPS, "eps"),
        (Par((Seq((Leaf("a"), Leaf("b"))), Leaf("c"))), "a.b||c"),
    ],
)
def test_format_term(term, expected):
    assert format_term(term) == expected


@pytest.mark.parametrize("bad", ["a..b", "ab", "(a", "a||", "a |b", "A", "a.8", ""])
def test_parse_errors_carry_offsets(bad):
    with pytest.raises(TermSyntaxError):
        pt(bad)


def test_parse_error_offset_points_at_culprit():
    with pytest.raises(TermSyntaxError) as err:
        pt("a.!b")
    assert err.value.offset == 2


# ---------------------------------------------------------------------------
# canonical forms

def test_canonicalize_flattens_and_drops_identity():
    assert canonicalize(par(Leaf("b"), par(Leaf("a"), Leaf("a")))) == pt("b||a||a")
    assert canonicalize(seq(Leaf("a"), EPS, Leaf("b"))) == pt("a.b")


def test_commutative_mode_sorts_parallel_children():
    assert canonicalize(pt("b||a||a"), COMMUTATIVE) == pt("a||a||b")
    # sorting is recursive and uses the canonical text order
    assert format_term(canonicalize(pt("b.a||a.b"), COMMUTATIVE)) == "a.b||b.a"


def test_single_child_collapses():
    assert par(Leaf("a")) == Leaf("a")
    assert seq() == EPS


# ---------------------------------------------------------------------------
# metrics

@pytest.mark.parametrize(
    "text,lg,dp",
    [
        ("a||b||c", 1, 3),
        ("a.b.c", 3, 1),
        ("(a||b).a", 2, 2),
        ("eps", 0, 0),
        ("a", 1, 1),
    ],
)
def test_length_and_depth(text, lg, dp):
    t = pt(text)
    assert length(t) == lg
    assert depth(t) == dp


def test_atom_counts():
    assert atoms_count(pt("a||b||a")) == 3
    assert atoms_multiset(pt("a||b||a")) == {"a": 2, "b": 1}
    assert atoms_count(EPS) == 0
    assert atoms_multiset(EPS) == {}
    assert atoms_count(pt("(a||b).a")) == 3


def test_recurrences_hold_structurally():
    # over all pairs of the 3-atom universe: composing and canonicalizing
    # keeps the defining equations for both metrics
    uni = enumerate_terms("ab", 3)
    for x in uni:
        for y in uni:
            assert length(canonicalize(seq(x, y))) == length(x) + length(y)
            assert depth(canonicalize(seq(x, y))) == max(depth(x), depth(y))
            assert length(canonicalize(par(x, y))) == max(length(x), length(y))
            assert depth(canonicalize(par(x, y))) == depth(x) + depth(y)


def test_zero_metrics_only_for_eps():
    for t in enumerate_terms("ab", 3):
        assert (length(t) == 0) == isinstance(t, Eps)
        assert (depth(t) == 0) == isinstance(t, Eps)


# ---------------------------------------------------------------------------
# reversal

def test_reverse_examples():
    assert reverse_term(pt("a||b")) == pt("a||b")
    assert reverse_term(pt("a.b")) == pt("b.a")
    assert reverse_term(pt("(c||d).a.b")) == pt("b.a.(c||d)")


def test_reverse_is_involution_and_preserves_metrics():
    for t in enumerate_terms("ab", 4):
        r = reverse_term(t)
        assert reverse_term(r) == t
        assert length(r) == length(t)
        assert depth(r) == depth(t)


# ---------------------------------------------------------------------------
# classification

@pytest.mark.parametrize(
    "text,cls",
    [
        ("a.b", TermClass.SEQUENTIAL),
        ("a||b", TermClass.PARALLEL),
        ("(a||b).a", TermClass.MIXED),
        ("a", TermClass.SEQUENTIAL),  # atoms prefer SEQUENTIAL in the single-valued form
        ("eps", TermClass.SEQUENTIAL),
    ],
)
def test_classify_term(text, cls):
    assert classify_term(pt(text)) == cls


def test_atoms_satisfy_both_word_predicates():
    assert is_sequential_word(Leaf("a")) and is_parallel_word(Leaf("a"))
    assert is_sequential_word(EPS) and is_parallel_word(EPS)
    assert not is_parallel_word(pt("a.b"))
    assert not is_sequential_word(pt("a||b"))


def test_classification_bounds_metrics():
    for t in enumerate_terms("ab", 4):
        if classify_term(t) == TermClass.PARALLEL:
            assert length(t) <= 1
        if classify_term(t) == TermClass.SEQUENTIAL:
            assert depth(t) <= 1


# ---------------------------------------------------------------------------
# enumeration

def test_enumerate_singleton_alphabet():
    assert enumerate_terms("a", 0) == (EPS,)
    assert {format_term(t) for t in enumerate_terms("a", 2)} == {"eps", "a", "a.a", "a||a"}


def test_enumerate_two_letters_two_atoms():
    # eps, both atoms, and all ordered two-atom pairs under each operator:
    # 1 + 2 + 2*(2*2) = 11
    uni = enumerate_terms("ab", 2)
    assert len(uni) == 11
    assert uni == binary_universe("ab", 2)


@pytest.mark.parametrize("mode", [ORDERED, COMMUTATIVE])
@pytest.mark.parametrize("max_atoms", [0, 1, 2, 3, 4])
def test_enumerate_matches_independent_generator(mode, max_atoms):
    assert enumerate_terms("ab", max_atoms, mode) == binary_universe("ab", max_atoms, mode)


def test_enumerate_output_is_sorted_and_canonical():
    uni = enumerate_terms("ab", 3, COMMUTATIVE)
    keys = [format_term(t) for t in uni]
    assert keys == sorted(keys)
    for t in uni:
        assert canonicalize(t, COMMUTATIVE) == t


def test_enumerate_cap():
    with pytest.raises(EnumerationCapError):
        enumerate_terms("ab", 6, cap=100)


def test_enumerate_rejects_bad_alphabet():
    with pytest.raises(ValueError):
        enumerate_terms(["A"], 2)


# ---------------------------------------------------------------------------
# randomized structural properties

atoms_st = st.sampled_from("ab").map(Leaf)
terms_st = st.recursive(
    st.just(EPS) | atoms_st,
    lambda inner: st.builds(lambda cs: seq(*cs), st.lists(inner, min_size=2, max_size=3))
    | st.builds(lambda cs: par(*cs), st.lists(inner, min_size=2, max_size=3)),
    max_leaves=10,
)


@given(terms_st, st.sampled_from([ORDERED, COMMUTATIVE]))
def test_canonicalize_idempotent(t, mode):
    once = canonicalize(t, mode)
    assert canonicalize(once, mode) == once


@given(terms_st)
def test_parse_format_round_trip(t):
    canon = canonicalize(t)
    assert parse_term(format_term(canon)) == canon


@given(terms_st)
def test_reverse_involution_random(t):
    canon = canonicalize(t)
    assert reverse_term(reverse_term(canon)) == canon
