import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GENS, const_words, free_words, raw_syllables
from logwitness.errors import ParseError, ResourceError, TrivialWordError, VariableInConstantError
from logwitness.words import (
    ConstWord,
    FreeWord,
    GeneratorSet,
    ball_size,
    const_word_length,
    enumerate_ball,
    enumerate_const_words,
    free_reduce,
    parse_const_word,
    parse_free_word,
    random_const_word,
    substitute,
)
from logwitness.rng import SplitMix64

A = FreeWord.generator(0)
B = FreeWord.generator(1)


@pytest.mark.parametrize(
    "text, syllables",
    [
        ("a b^-1", ((0, 1), (1, -1))),
        ("a a^-1", ()),
        ("a b b^-1 a", ((0, 2),)),
        ("ab", ((0, 1), (1, 1))),
        ("(a b)^2", ((0, 1), (1, 1), (0, 1), (1, 1))),
        ("(a b)^-1", ((1, -1), (0, -1))),
        ("a^3a^-1", ((0, 2),)),
        ("", ()),
    ],
)
def test_parse_free_word(text, syllables):
    assert parse_free_word(text, GENS).syllables == syllables


@pytest.mark.parametrize("text", ["a c", "a^", "a^x", "a^1.5", "(a b", "a b)", "a + b", "a2"])
def test_parse_free_word_lexical_errors(text):
    with pytest.raises(ParseError):
        parse_free_word(text, GENS)


@pytest.mark.parametrize("text", ["a x", "x x^-1", "(a x)^0"])
def test_variable_in_constant(text):
    with pytest.raises(VariableInConstantError):
        parse_free_word(text, GENS)


def test_parse_const_word_examples():
    w = parse_const_word("x^3", GENS)
    assert (w.a0, w.body) == (3, ())
    w = parse_const_word("a x a^-1 x^-1", GENS)
    assert w.a0 == 0
    assert w.body == ((A, 1), (A.inverse(), -1))
    # a x^2 (a^-1 a) x = a x^3
    w = parse_const_word("a x^2 a^-1 x^0 a x", GENS)
    assert (w.a0, w.body) == (0, ((A, 3),))


def test_parse_const_word_merges_to_fixpoint():
    # interior x^0 joins a and a^-1, which cancel; then x^2 x^-2 cancels too
    w = parse_const_word("b x^2 a x^0 a^-1 x^-2 b", GENS)
    assert (w.a0, w.body) == (0, ((B ** 2, 0),))


@pytest.mark.parametrize("text", ["a a^-1", "x x^-1", "a x x^-1 a^-1", "x^0"])
def test_trivial_word_rejected(text):
    with pytest.raises(TrivialWordError):
        parse_const_word(text, GENS)


def test_no_letters_rejected():
    with pytest.raises(ParseError):
        parse_const_word("   ", GENS)


def test_free_reduce_examples():
    assert free_reduce([(0, 1), (0, -1)]).syllables == ()
    assert free_reduce([(0, 1), (1, 2), (1, -2), (0, 1)]).syllables == ((0, 2),)


@given(raw_syllables())
def test_free_reduce_idempotent(u):
    once = free_reduce(u)
    assert free_reduce(once.syllables) == once
    assert all(e != 0 for _, e in once.syllables)
    assert all(x[0] != y[0] for x, y in zip(once.syllables, once.syllables[1:]))


@given(raw_syllables(), raw_syllables())
def test_free_reduce_congruence(u, v):
    assert free_reduce(u + v) == free_reduce(free_reduce(u).syllables + free_reduce(v).syllables)


@given(free_words())
def test_inverse_cancels(u):
    assert (u * u.inverse()).syllables == ()
    assert len(u.inverse()) == len(u)


@given(free_words(), free_words())
def test_length_subadditive(u, v):
    assert len(u * v) <= len(u) + len(v)


def test_substitute_examples():
    x = parse_const_word("x", GENS)
    assert substitute(x, parse_free_word("ab", GENS)) == A * B
    comm = parse_const_word("a x a^-1 x^-1", GENS)
    assert substitute(comm, A) == FreeWord()
    assert substitute(comm, B).render(GENS) == "a b a^-1 b^-1"


@given(const_words())
def test_substitute_identity_multiplies_constants(w):
    product = FreeWord()
    for c in w.constants:
        product = product * c
    assert substitute(w, FreeWord()) == product


@given(const_words(), free_words())
def test_substitute_is_homomorphism(w, g):
    # replacing x by g inside the free group on {a, b, x}
    letters = []
    for gen, e in w.to_free(2).syllables:
        letters.extend((g ** e).syllables if gen == 2 else [(gen, e)])
    assert substitute(w, g) == free_reduce(letters)


@pytest.mark.parametrize("text, n", [("x^3", 3), ("a x a^-1 x^-1", 4), ("a^2 x^-2 b", 5)])
def test_const_word_length(text, n):
    assert const_word_length(parse_const_word(text, GENS)) == n


@given(const_words())
def test_render_parse_roundtrip(w):
    assert parse_const_word(w.render(GENS), GENS) == w


@given(free_words())
def test_free_render_roundtrip(u):
    assert parse_free_word(u.render(GENS), GENS) == u


def test_const_word_invariants_enforced():
    with pytest.raises(ValueError):
        ConstWord(1, ((FreeWord(), 1),))
    with pytest.raises(ValueError):
        ConstWord(1, ((A, 0), (B, 1)))
    with pytest.raises(TrivialWordError):
        ConstWord(0, ())


def test_generator_set_validation():
    assert GeneratorSet.default(3).names == ("a", "b", "c")
    with pytest.raises(ValueError):
        GeneratorSet(("a", "x"))
    with pytest.raises(ValueError):
        GeneratorSet(("a", "a"))
    with pytest.raises(ValueError):
        GeneratorSet(())


def _brute_force_ball(rank, radius):
    # every letter string, reduced; independent of the layered enumerator
    out = set()
    for length in range(radius + 1):
        for letters in itertools.product(range(2 * rank), repeat=length):
            out.add(FreeWord.from_letters(letters))
    return out


@pytest.mark.parametrize("radius, count", [(0, 1), (1, 5), (3, 53)])
def test_enumerate_ball_counts(radius, count):
    words = list(enumerate_ball(GENS, radius))
    assert len(words) == count == ball_size(2, radius)
    assert set(words) == _brute_force_ball(2, radius)


def test_enumerate_ball_order_and_uniqueness():
    words = list(enumerate_ball(GENS, 6))
    assert len(words) == len(set(words)) == ball_size(2, 6)
    lengths = [len(w) for w in words]
    assert lengths == sorted(lengths)
    assert [w.render(GENS) for w in words[:5]] == ["", "a", "a^-1", "b", "b^-1"]
    # lexicographic within a length, with a < a^-1 < b < b^-1
    layer2 = [tuple(w.letters()) for w in words if len(w) == 2]
    assert layer2 == sorted(layer2)
    assert all(free_reduce(w.syllables) == w for w in words)


def test_enumerate_ball_cap():
    with pytest.raises(ResourceError):
        list(enumerate_ball(GENS, 10, cap=1000))


def test_enumerate_const_words_is_bijective():
    words = list(enumerate_const_words(GENS, 3))
    assert len(words) == len(set(words)) == ball_size(3, 3) - 1
    assert {len(w) for w in words} == {1, 2, 3}
    length_one = sorted(w.render(GENS) for w in words if len(w) == 1)
    assert length_one == sorted(["x", "x^-1", "a", "a^-1", "b", "b^-1"])


@settings(max_examples=50)
@given(st.integers(0, 2**64 - 1), st.integers(1, 60))
def test_random_words(seed, n):
    rng = SplitMix64(seed)
    w = random_const_word(rng, GENS, n, balanced=True)
    assert len(w) <= n
    assert not substitute(w, FreeWord())
    u = random_const_word(rng, GENS, n, balanced=False)
    assert len(u) == n
