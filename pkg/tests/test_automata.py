import dataclasses

import pytest

from splang.automata import (
    BranchingAutomaton,
    ForkTransition,
    JoinTransition,
    ParTransition,
    SeqTransition,
    accepts,
    automaton_alphabet,
    enumerate_accepted,
    from_linear_grammar,
    observe_par_guards,
    parse_automaton,
    runs_between,
    serialize_automaton,
    with_observed_guards,
)
from splang.errors import NotParallelLinearError, TermSyntaxError
from splang.grammars import parse_grammar, random_parallel_linear_grammar
from splang.langs import lang_equal
from splang.grammars import generate
from splang.terms import (
    COMMUTATIVE,
    canonicalize,
    enumerate_terms,
    format_term,
    is_parallel_word,
    parse_term,
)


def pt(text):
    return parse_term(text)


def texts(lang):
    return [format_term(t) for t in lang]


STEPS = 28


@pytest.fixture(scope="module")
def fanout_automaton(request):
    g = parse_grammar("S -> a||B\nB -> b||B | b\n")
    return from_linear_grammar(g)


MINIMAL = """
states: p q
initial: p
final: q
seq: p a q
"""


# ---------------------------------------------------------------------------
# data model and file format

def test_minimal_automaton_accepts_one_atom():
    aut = parse_automaton(MINIMAL)
    assert accepts(aut, pt("a"))
    assert not accepts(aut, pt("a.a"))
    assert not accepts(aut, pt("eps"))
    assert texts(enumerate_accepted(aut, "a", 2)) == ["a"]


def test_round_trip_is_a_fixpoint(fanout_automaton):
    text = serialize_automaton(fanout_automaton)
    again = parse_automaton(text)
    assert serialize_automaton(again) == text
    assert again == fanout_automaton


def test_fork_needs_two_targets():
    bad = MINIMAL + "fork: F1 p -> {q}\njoin: J1 {p, q} -> q\npar: F1 * J1\n"
    with pytest.raises(TermSyntaxError):
        parse_automaton(bad)


def test_unreferenced_fork_rejected_at_load():
    bad = MINIMAL + "fork: F1 p -> {q, q}\n"
    with pytest.raises(TermSyntaxError):
        parse_automaton(bad)


def test_dangling_par_reference_rejected():
    bad = MINIMAL + "par: F9 * J9\n"
    with pytest.raises(TermSyntaxError):
        parse_automaton(bad)


def test_section_order_enforced():
    shuffled = "initial: p\nstates: p q\nfinal: q\nseq: p a q\n"
    with pytest.raises(TermSyntaxError):
        parse_automaton(shuffled)


def test_undeclared_state_rejected():
    with pytest.raises(TermSyntaxError):
        parse_automaton("states: p\ninitial: p\nfinal: p\nseq: p a r\n")


def test_guard_syntax_round_trips():
    text = MINIMAL + "fork: F1 p -> {p, q}\njoin: J1 {p, q} -> q\npar: F1 {a,b;a,a,b} J1\n"
    aut = parse_automaton(text)
    (par_tr,) = aut.pars
    assert par_tr.guard == frozenset({("a", "b"), ("a", "a", "b")})
    assert "par: F1 {a,a,b;a,b} J1" in serialize_automaton(aut)


# ---------------------------------------------------------------------------
# run semantics

def test_runs_stay_put_on_eps(fanout_automaton):
    for state in sorted(fanout_automaton.states):
        assert runs_between(fanout_automaton, state, pt("eps")) == {state}


def test_runs_on_worked_example(fanout_automaton):
    assert "ret_S" in runs_between(fanout_automaton, "entry_S", pt("a||b"))
    assert runs_between(fanout_automaton, "entry_S", pt("a||a")) == frozenset()


def test_sequential_runs_compose(fanout_automaton):
    uni = enumerate_terms("ab", 2, COMMUTATIVE)
    for x in uni:
        for y in uni:
            composed = canonicalize(parse_term(f"({format_term(x)}).({format_term(y)})"), COMMUTATIVE)
            for p in sorted(fanout_automaton.states):
                direct = runs_between(fanout_automaton, p, composed)
                stitched = frozenset(
                    q
                    for r in runs_between(fanout_automaton, p, x)
                    for q in runs_between(fanout_automaton, r, y)
                )
                assert direct == stitched


def test_acceptance_on_worked_example(fanout_automaton):
    assert accepts(fanout_automaton, pt("a||b"))
    assert accepts(fanout_automaton, pt("a||b||b"))
    assert not accepts(fanout_automaton, pt("b"))
    assert not accepts(fanout_automaton, pt("a"))
    assert not accepts(fanout_automaton, pt("eps"))


def test_acceptance_ignores_parallel_order(fanout_automaton):
    assert accepts(fanout_automaton, pt("b||a"))
    for t in enumerate_terms("ab", 3):
        assert accepts(fanout_automaton, t) == accepts(
            fanout_automaton, canonicalize(t, COMMUTATIVE)
        )


def test_eps_accepted_iff_initial_meets_final():
    aut = parse_automaton("states: p\ninitial: p\nfinal: p\n")
    assert accepts(aut, pt("eps"))
    assert texts(enumerate_accepted(aut, "ab", 1)) == ["eps"]
    empty = parse_automaton("states: p q\ninitial: p\nfinal: q\n")
    assert texts(enumerate_accepted(empty, "ab", 2)) == []


def test_enumerate_accepted_on_worked_example(fanout_automaton):
    assert texts(enumerate_accepted(fanout_automaton, "ab", 4)) == [
        "a||b",
        "a||b||b",
        "a||b||b||b",
    ]


# ---------------------------------------------------------------------------
# construction from grammars

def test_single_production_grammar_gives_two_states():
    aut = from_linear_grammar(parse_grammar("S -> a\n"))
    assert aut.states == {"entry_S", "ret_S"}
    assert len(aut.seqs) == 1 and not aut.forks
    assert texts(enumerate_accepted(aut, "a", 2)) == ["a"]


def test_worked_example_has_two_fork_join_pairs(fanout_automaton):
    assert len(fanout_automaton.forks) == 2
    assert len(fanout_automaton.joins) == 2
    assert len(fanout_automaton.seqs) == 3  # two branch atoms plus B -> b
    assert automaton_alphabet(fanout_automaton) == ("a", "b")


def test_non_linear_grammar_rejected(branches_grammar):
    with pytest.raises(NotParallelLinearError):
        from_linear_grammar(branches_grammar)


def equivalent_at(g, bound):
    aut = from_linear_grammar(g)
    generated = generate(g, bound, 4 * bound + 8, COMMUTATIVE)
    alphabet = sorted(g.terminals)
    accepted = enumerate_accepted(aut, alphabet, bound)
    return lang_equal(generated, accepted)


def test_bounded_equivalence_on_fixtures(pairs_grammar, fanout_grammar):
    assert equivalent_at(pairs_grammar, 6)
    assert equivalent_at(fanout_grammar, 5)


def test_bounded_equivalence_on_seeded_grammars():
    for seed in range(20):
        diff = equivalent_at(random_parallel_linear_grammar(seed), 5)
        assert diff, f"seed {seed}: {diff.report()}"


def test_epsilon_continuations_do_not_leak():
    # continuation that only vanishes: the fork variant without it must exist
    g = parse_grammar("S -> a||b||W\nW -> eps\n")
    aut = from_linear_grammar(g)
    assert accepts(aut, pt("a||b"))
    assert not accepts(aut, pt("eps"))
    assert equivalent_at(g, 4)


def test_epsilon_start_does_not_chain():
    # S -> a | eps accepts a and eps but no longer sequential words
    g = parse_grammar("S -> a | eps\n")
    aut = from_linear_grammar(g)
    assert accepts(aut, pt("eps")) and accepts(aut, pt("a"))
    assert not accepts(aut, pt("a.a"))
    assert equivalent_at(g, 4)


def test_accepted_words_are_parallel_words(fanout_grammar):
    fixtures = [fanout_grammar] + [random_parallel_linear_grammar(s) for s in range(10)]
    for g in fixtures:
        aut = from_linear_grammar(g)
        for t in enumerate_accepted(aut, "ab", 4):
            assert is_parallel_word(t)


def test_removing_a_join_shrinks_the_language(fanout_automaton):
    lost_join = fanout_automaton.joins[0].jid
    mutated = dataclasses.replace(
        fanout_automaton,
        joins=tuple(j for j in fanout_automaton.joins if j.jid != lost_join),
        pars=tuple(p for p in fanout_automaton.pars if p.join_id != lost_join),
    )
    before = enumerate_accepted(fanout_automaton, "ab", 4)
    after = enumerate_accepted(mutated, "ab", 4)
    diff = lang_equal(before, after)
    assert not diff
    assert diff.only_left  # witnesses for the lost words


# ---------------------------------------------------------------------------
# guards

def test_guard_restricts_multisets():
    text = (
        "states: p q1 q2 r1 r2 q\n"
        "initial: p\nfinal: q\n"
        "seq: q1 a r1\nseq: q2 b r2\nseq: q2 a r2\n"
        "fork: F1 p -> {q1, q2}\n"
        "join: J1 {r1, r2} -> q\n"
        "par: F1 {a,b} J1\n"
    )
    aut = parse_automaton(text)
    assert accepts(aut, pt("a||b"))
    assert not accepts(aut, pt("a||a"))  # run exists but the guard forbids it
    unguarded = dataclasses.replace(
        aut, pars=(ParTransition("F1", None, "J1"),)
    )
    assert accepts(unguarded, pt("a||a"))


def test_observed_guards_preserve_the_bounded_language(fanout_grammar):
    fixtures = [fanout_grammar] + [random_parallel_linear_grammar(s) for s in range(10)]
    for g in fixtures:
        aut = from_linear_grammar(g)
        uni = enumerate_terms("ab", 5, COMMUTATIVE)
        flat, nonflat = observe_par_guards(aut, uni)
        pinned = with_observed_guards(aut, flat, nonflat)
        assert lang_equal(
            enumerate_accepted(aut, "ab", 5), enumerate_accepted(pinned, "ab", 5)
        )


def test_constructed_guards_fire_only_on_flat_words(fanout_automaton):
    flat, nonflat = observe_par_guards(
        fanout_automaton, enumerate_terms("ab", 5, COMMUTATIVE)
    )
    assert not nonflat
    assert flat  # both par transitions fire somewhere
