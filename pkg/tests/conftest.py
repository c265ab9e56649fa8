import sys
from pathlib import Path

import pytest

from splang.grammars import Grammar, parse_grammar

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))  # for the oracles module


def load_grammar(name: str) -> Grammar:
    return parse_grammar((DATA / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def pairs_grammar() -> Grammar:
    """Loops a parallel pair: words (a||b) repeated in parallel, plus eps."""
    return load_grammar("parallel_pairs.g")


@pytest.fixture(scope="session")
def branches_grammar() -> Grammar:
    """Two sequential branches in parallel: words a^m || b^n with m,n >= 1."""
    return load_grammar("branch_words.g")


@pytest.fixture(scope="session")
def fanout_grammar() -> Grammar:
    """One a beside a fan of bs: words a || b^n with n >= 1."""
    return load_grammar("a_fanout.g")


@pytest.fixture(scope="session")
def fan_tail_grammar() -> Grammar:
    """A parallel fan followed by a sequential a: words (a^n || b).a."""
    return load_grammar("fan_tail.g")
