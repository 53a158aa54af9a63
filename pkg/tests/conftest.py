import hypothesis.strategies as st
import pytest

from logwitness.intmat import sanov_generators
from logwitness.words import ConstWord, FreeWord, GeneratorSet, const_word_from_free, free_reduce

ACCEPTANCE_LINES = []

GENS = GeneratorSet.default(2)


def raw_syllables(rank=2, max_size=12, max_exp=3):
    return st.lists(
        st.tuples(st.integers(0, rank - 1), st.integers(-max_exp, max_exp)), max_size=max_size
    )


def free_words(rank=2, max_size=8, max_exp=2):
    return raw_syllables(rank, max_size, max_exp).map(free_reduce)


def short_free_words(max_len=8, rank=2):
    letters = st.lists(st.integers(0, 2 * rank - 1), max_size=max_len)
    return letters.map(FreeWord.from_letters)


def const_words(rank=2, max_size=10, max_exp=3):
    # reduced words over the generators plus x, with x as generator `rank`
    return (
        raw_syllables(rank + 1, max_size, max_exp)
        .map(free_reduce)
        .filter(lambda u: any(g == rank for g, _ in u.syllables))
        .map(lambda u: const_word_from_free(u, rank))
    )


@pytest.fixture(scope="session")
def sanov():
    return sanov_generators()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
