"""Free-group words, words with constants, and the word grammar.

Generators of a rank-``r`` free group are indexed ``0..r-1``.  A *letter* is
a generator or its inverse, encoded as an integer: letter ``2*i`` is
generator ``i`` and letter ``2*i + 1`` is its inverse.  This fixes the
enumeration order ``a < a^-1 < b < b^-1 < ...`` used everywhere for
reproducible tie-breaking.

A word with constants is stored in the canonical form
``x^a0 c1 x^a1 ... ck x^ak`` where each ``ci`` is a nontrivial reduced word
and the interior exponents ``a1..a(k-1)`` are nonzero.  Canonical forms are
in bijection with nontrivial reduced words of the free group on the
generators plus ``x``, which is how parsing and enumeration produce them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from string import ascii_lowercase
from typing import Iterator, Sequence

from .errors import ParseError, ResourceError, TrivialWordError, VariableInConstantError

VARIABLE = "x"
DEFAULT_BALL_CAP = 1 << 22


@dataclass(frozen=True)
class GeneratorSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValueError("rank must be at least 1")
        if len(set(names)) != len(names):
            raise ValueError(f"generator names not distinct: {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9]*", name):
                raise ValueError(f"invalid generator name {name!r}")
        if VARIABLE in names:
            raise ValueError("'x' is reserved for the variable")

    @classmethod
    def default(cls, rank: int = 2) -> "GeneratorSet":
        letters = [c for c in ascii_lowercase if c != VARIABLE]
        if rank < 1:
            raise ValueError("rank must be at least 1")
        if rank <= len(letters):
            return cls(tuple(letters[:rank]))
        return cls(tuple(f"g{i}" for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


def letter_to_syllable(letter: int) -> tuple[int, int]:
    return letter >> 1, -1 if letter & 1 else 1


def free_reduce(syllables) -> "FreeWord":
    """Free reduction of a raw ``(generator, exponent)`` list."""
    out: list[tuple[int, int]] = []
    for gen, exp in syllables:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            exp += out.pop()[1]
            if exp:
                out.append((gen, exp))
        else:
            out.append((gen, exp))
    return FreeWord(tuple(out))


@dataclass(frozen=True)
class FreeWord:
    """Reduced word; ``syllables`` is a tuple of ``(generator, exponent)``."""

    syllables: tuple[tuple[int, int], ...] = ()

    @classmethod
    def identity(cls) -> "FreeWord":
        return cls(())

    @classmethod
    def generator(cls, index: int, exponent: int = 1) -> "FreeWord":
        return free_reduce([(index, exponent)])

    @classmethod
    def from_letters(cls, letters: Sequence[int]) -> "FreeWord":
        return free_reduce(letter_to_syllable(l) for l in letters)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return free_reduce(self.syllables + other.syllables)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __invert__(self) -> "FreeWord":
        return self.inverse()

    def __pow__(self, n: int) -> "FreeWord":
        base = self if n >= 0 else self.inverse()
        return free_reduce(base.syllables * abs(n))

    def letters(self) -> list[int]:
        out = []
        for g, e in self.syllables:
            out.extend([2 * g + (e < 0)] * abs(e))
        return out

    def max_generator(self) -> int:
        return max((g for g, _ in self.syllables), default=-1)

    def render(self, gens: GeneratorSet | None = None) -> str:
        names = _names_for(gens, self.max_generator() + 1)
        return " ".join(_term(names[g], e) for g, e in self.syllables)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class ConstWord:
    """``x^a0 c1 x^a1 ... ck x^ak`` with ``body = ((c1, a1), ..., (ck, ak))``."""

    a0: int
    body: tuple[tuple[FreeWord, int], ...] = ()

    def __post_init__(self):
        body = tuple((c, int(a)) for c, a in self.body)
        object.__setattr__(self, "body", body)
        for i, (c, a) in enumerate(body):
            if not c:
                raise ValueError(f"constant {i + 1} is trivial")
            if a == 0 and i < len(body) - 1:
                raise ValueError(f"interior exponent {i + 1} is zero")
        if not body and self.a0 == 0:
            raise TrivialWordError("the trivial word is not an equation")

    @property
    def k(self) -> int:
        return len(self.body)

    @property
    def constants(self) -> list[FreeWord]:
        return [c for c, _ in self.body]

    @property
    def exponents(self) -> list[int]:
        return [self.a0] + [a for _, a in self.body]

    def __len__(self) -> int:
        return const_word_length(self)

    def to_free(self, rank: int) -> FreeWord:
        """The same word in the free group with ``x`` as generator ``rank``."""
        syl = [(rank, self.a0)]
        for c, a in self.body:
            syl.extend(c.syllables)
            syl.append((rank, a))
        return free_reduce(syl)

    def inverse(self) -> "ConstWord":
        rank = max((c.max_generator() for c in self.constants), default=-1) + 1
        return const_word_from_free(self.to_free(rank).inverse(), rank)

    def render(self, gens: GeneratorSet | None = None) -> str:
        top = max((c.max_generator() for c in self.constants), default=-1) + 1
        names = _names_for(gens, top)
        terms = []
        if self.a0:
            terms.append(_term(VARIABLE, self.a0))
        for c, a in self.body:
            terms.extend(_term(names[g], e) for g, e in c.syllables)
            if a:
                terms.append(_term(VARIABLE, a))
        return " ".join(terms)

    def __str__(self) -> str:
        return self.render()


def _names_for(gens, needed):
    if gens is None:
        gens = GeneratorSet.default(max(needed, 1))
    if needed > gens.rank:
        raise ValueError(f"word uses generator {needed - 1} but rank is {gens.rank}")
    return gens.names


def _term(name: str, exp: int) -> str:
    return name if exp == 1 else f"{name}^{exp}"


def const_word_from_free(word: FreeWord, rank: int) -> ConstWord:
    """Split a reduced word over generators plus ``x`` (index ``rank``)."""
    syl = word.syllables
    if not syl:
        raise TrivialWordError("the trivial word is not an equation")
    i = 0
    a0 = 0
    if syl[0][0] == rank:
        a0 = syl[0][1]
        i = 1
    body = []
    while i < len(syl):
        j = i
        while j < len(syl) and syl[j][0] != rank:
            j += 1
        c = FreeWord(syl[i:j])
        a = syl[j][1] if j < len(syl) else 0
        body.append((c, a))
        i = j + 1
    return ConstWord(a0, tuple(body))


def const_word_length(w: ConstWord) -> int:
    return sum(abs(a) for a in w.exponents) + sum(len(c) for c in w.constants)


def substitute(w: ConstWord, g: FreeWord) -> FreeWord:
    """Image of ``w`` under ``x -> g``, freely reduced."""
    syl = list((g ** w.a0).syllables)
    for c, a in w.body:
        syl.extend(c.syllables)
        syl.extend((g ** a).syllables)
    return free_reduce(syl)


# --- parsing -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9]*)|(\^)|(\()|(\))|(-?[0-9]+)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        ident, caret, lpar, rpar, num, bad = m.groups()
        if bad is not None:
            raise ParseError(f"unexpected character {bad!r} at offset {m.start(6)}")
        if ident is not None:
            tokens.append(("ident", ident))
        elif caret:
            tokens.append(("^", caret))
        elif lpar:
            tokens.append(("(", lpar))
        elif rpar:
            tokens.append((")", rpar))
        else:
            tokens.append(("int", num))
        pos = m.end()
    return tokens


class _Parser:
    # The variable is parsed as generator ``rank``; callers decide whether
    # it is allowed.
    def __init__(self, text, gens: GeneratorSet):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.gens = gens
        self.lookup = {name: i for i, name in enumerate(gens.names)}
        self.lookup[VARIABLE] = gens.rank

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, kind):
        if self.peek() != kind:
            found = self.tokens[self.pos][1] if self.pos < len(self.tokens) else "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}")
        self.pos += 1
        return self.tokens[self.pos - 1][1]

    def parse(self) -> FreeWord:
        word = self.word()
        if self.pos != len(self.tokens):
            raise ParseError(f"unexpected {self.tokens[self.pos][1]!r}")
        return word

    def word(self) -> FreeWord:
        syl = []
        while self.peek() in ("ident", "("):
            syl.extend(self.term())
        if not syl and self.peek() not in (None, ")"):
            raise ParseError(f"unexpected {self.tokens[self.pos][1]!r}")
        return free_reduce(syl)

    def term(self):
        if self.peek() == "(":
            self.take("(")
            inner = self.word()
            self.take(")")
            atoms = [inner]
        else:
            atoms = [FreeWord.generator(i) for i in self._split(self.take("ident"))]
        if self.peek() == "^":
            self.take("^")
            if self.peek() != "int":
                raise ParseError("malformed exponent")
            atoms[-1] = atoms[-1] ** int(self.take("int"))
        return [s for atom in atoms for s in atom.syllables]

    def _split(self, ident):
        # Juxtaposed single-letter names ("ab") lex as one identifier; split
        # by longest match against the known names.
        if ident in self.lookup:
            return [self.lookup[ident]]
        out = []
        pos = 0
        names = sorted(self.lookup, key=len, reverse=True)
        while pos < len(ident):
            for name in names:
                if ident.startswith(name, pos):
                    out.append(self.lookup[name])
                    pos += len(name)
                    break
            else:
                raise ParseError(f"unknown identifier {ident!r}")
        return out


def parse_free_word(text: str, gens: GeneratorSet | None = None) -> FreeWord:
    gens = gens or GeneratorSet.default()
    word = _Parser(text, gens).parse()
    if any(g == gens.rank for g, _ in word.syllables) or _mentions_variable(text, gens):
        raise VariableInConstantError(f"variable 'x' in constant word {text!r}")
    return word


def _mentions_variable(text, gens):
    # x may cancel away (e.g. "x x^-1"); still reject it.
    parser = _Parser(text, gens)
    for kind, value in parser.tokens:
        if kind == "ident" and gens.rank in parser._split(value):
            return True
    return False


def parse_const_word(text: str, gens: GeneratorSet | None = None) -> ConstWord:
    gens = gens or GeneratorSet.default()
    parser = _Parser(text, gens)
    if not any(kind == "ident" for kind, _ in parser.tokens):
        raise ParseError("word contains no letters")
    return const_word_from_free(parser.parse(), gens.rank)


# --- enumeration and sampling ---------------------------------------------


def ball_size(rank: int, radius: int) -> int:
    """``1 + sum_{j=1}^{radius} 2r (2r-1)^(j-1)``."""
    return 1 + sum(2 * rank * (2 * rank - 1) ** (j - 1) for j in range(1, radius + 1))


def reduced_letter_words(num_letters: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Reduced letter tuples of length ``<= radius`` in length-then-lex order."""
    layer: list[tuple[int, ...]] = [()]
    yield ()
    for _ in range(radius):
        nxt = []
        for word in layer:
            forbidden = word[-1] ^ 1 if word else -1
            for letter in range(num_letters):
                if letter != forbidden:
                    new = word + (letter,)
                    nxt.append(new)
                    yield new
        layer = nxt


def enumerate_ball(gens: GeneratorSet, radius: int, cap: int = DEFAULT_BALL_CAP) -> Iterator[FreeWord]:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    size = ball_size(gens.rank, radius)
    if size > cap:
        raise ResourceError(f"ball of radius {radius} has {size} elements (cap {cap})")
    for letters in reduced_letter_words(2 * gens.rank, radius):
        yield FreeWord.from_letters(letters)


def enumerate_const_words(gens: GeneratorSet, max_length: int, cap: int = DEFAULT_BALL_CAP) -> Iterator[ConstWord]:
    """Every canonical word with constants of length ``1..max_length``."""
    rank = gens.rank
    size = ball_size(rank + 1, max_length)
    if size > cap:
        raise ResourceError(f"{size} candidate words exceed cap {cap}")
    for letters in reduced_letter_words(2 * (rank + 1), max_length):
        if letters:
            yield const_word_from_free(FreeWord.from_letters(letters), rank)


def random_reduced_letters(rng, num_letters: int, length: int) -> list[int]:
    out: list[int] = []
    for _ in range(length):
        if not out:
            out.append(rng.below(num_letters))
        else:
            # uniform over the letters other than the inverse of the last
            letter = rng.below(num_letters - 1)
            if letter >= out[-1] ^ 1:
                letter += 1
            out.append(letter)
    return out


def random_const_word(rng, gens: GeneratorSet, n: int, balanced: bool = True) -> ConstWord:
    """A random word with constants of length ``<= n``.

    Unbalanced words are uniform reduced words of length exactly ``n`` over
    the generators and ``x``.  Balanced words take such a word ``v`` of length
    ``n // 2`` and append the inverse of its constant part, so that
    ``w(e) = e`` and the identity is never a witness.
    """
    rank = gens.rank
    if balanced and n < 2:
        return ConstWord(1 - 2 * rng.below(2))
    if not balanced:
        return const_word_from_free(
            FreeWord.from_letters(random_reduced_letters(rng, 2 * rank + 2, n)), rank
        )
    while True:
        v = FreeWord.from_letters(random_reduced_letters(rng, 2 * rank + 2, n // 2))
        c = free_reduce((g, e) for g, e in v.syllables if g != rank)
        w = v * c.inverse()
        if any(g == rank for g, _ in w.syllables):
            return const_word_from_free(w, rank)
