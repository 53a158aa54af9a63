"""Brute-force ground truth at desk scale.

Exact complexity by enumerating the free ball, exact growth for tiny lengths,
and exhaustive mixed-identity search in small finite groups.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import LogWitnessError, ResourceError
from .modp import mat_mul, pack
from .primes import is_prime
from .rng import SplitMix64
from .words import (
    DEFAULT_BALL_CAP,
    VARIABLE,
    ConstWord,
    FreeWord,
    GeneratorSet,
    ball_size,
    enumerate_const_words,
    reduced_letter_words,
    substitute,
)


@dataclass
class ComplexityRecord:
    word: ConstWord
    chi: int | None
    witness: FreeWord | None
    radius: int

    @property
    def resolved(self) -> bool:
        return self.chi is not None

    def to_dict(self, gens: GeneratorSet | None = None) -> dict:
        return {
            "word": self.word.render(gens),
            "chi": self.chi,
            "resolved": self.resolved,
            "lower_bound": self.chi if self.resolved else self.radius + 1,
            "witness": self.witness.render(gens) if self.witness is not None else None,
            "radius": self.radius,
        }


def exact_complexity(
    w: ConstWord, r_max: int, gens: GeneratorSet | None = None, cap: int = DEFAULT_BALL_CAP
) -> ComplexityRecord:
    """Shortest ``g`` with ``w(g) != e`` in the free group, searching ``B(r_max)``.

    ``g = e`` counts (length 0) when the constants do not multiply to ``e``.
    An unresolved record means the complexity exceeds ``r_max``.
    """
    gens = gens or GeneratorSet.default()
    if ball_size(gens.rank, r_max) > cap:
        raise ResourceError(f"ball of radius {r_max} exceeds cap {cap}")
    for letters in reduced_letter_words(2 * gens.rank, r_max):
        g = FreeWord.from_letters(letters)
        if substitute(w, g):
            return ComplexityRecord(w, len(letters), g, r_max)
    return ComplexityRecord(w, None, None, r_max)


@dataclass
class GrowthRow:
    n: int
    words: int
    M: int | None
    unresolved: int
    lower_bound: int


def exact_growth(n_max: int, r_max: int, gens: GeneratorSet | None = None, cap: int = DEFAULT_BALL_CAP) -> list[GrowthRow]:
    """Exact ``M(n)`` for ``n <= n_max`` over every canonical word.

    ``M`` is ``None`` for a length where some word is unresolved at
    ``r_max``; ``lower_bound`` then reads ``r_max + 1``.
    """
    gens = gens or GeneratorSet.default()
    by_length: dict[int, list] = {n: [0, 0, 0] for n in range(1, n_max + 1)}  # count, max chi, unresolved
    for w in enumerate_const_words(gens, n_max, cap):
        rec = exact_complexity(w, r_max, gens, cap)
        slot = by_length[len(w)]
        slot[0] += 1
        if rec.resolved:
            slot[1] = max(slot[1], rec.chi)
        else:
            slot[2] += 1
    rows = []
    words = best = unresolved = 0
    for n in range(1, n_max + 1):
        count, chi, unres = by_length[n]
        words += count
        best = max(best, chi)
        unresolved += unres
        rows.append(
            GrowthRow(n, words, None if unresolved else best, unresolved, r_max + 1 if unresolved else best)
        )
    return rows


# --- finite groups ------------------------------------------------------------------


@dataclass
class FiniteGroupTable:
    mul: np.ndarray
    names: list[str]
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False)
    center: frozenset = field(init=False)

    def __post_init__(self):
        mul = np.asarray(self.mul, dtype=np.int64)
        m = len(self.names)
        if mul.shape != (m, m):
            raise LogWitnessError(f"multiplication table has shape {mul.shape}, expected {(m, m)}")
        if mul.min() < 0 or mul.max() >= m:
            raise LogWitnessError("table entries out of range")
        self.mul = mul
        ar = np.arange(m)
        for i in range(m):
            if np.array_equal(mul[i], ar) and np.array_equal(mul[:, i], ar):
                self.identity = i
                break
        else:
            raise LogWitnessError("no identity element")
        sorted_rows = np.sort(mul, axis=1)
        sorted_cols = np.sort(mul, axis=0)
        if not (np.all(sorted_rows == ar) and np.all(sorted_cols == ar[:, None])):
            raise LogWitnessError("table is not a Latin square")
        self.inverse = np.argmax(mul == self.identity, axis=1)
        rng = SplitMix64(m)
        for _ in range(min(2000, m**3)):
            a, b, c = rng.below(m), rng.below(m), rng.below(m)
            if mul[mul[a, b], c] != mul[a, mul[b, c]]:
                raise LogWitnessError(f"not associative at ({a}, {b}, {c})")
        self.center = frozenset(int(z) for z in range(m) if np.array_equal(mul[z], mul[:, z]))

    @property
    def order(self) -> int:
        return len(self.names)

    def to_json(self) -> dict:
        return {"order": self.order, "mul": self.mul.tolist(), "names": list(self.names)}


def _cyclic(m: int) -> FiniteGroupTable:
    ar = np.arange(m)
    names = ["e"] + (["c"] if m == 2 else [f"c{i}" for i in range(1, m)])
    return FiniteGroupTable((ar[:, None] + ar[None, :]) % m, names)


def _psl2(p: int) -> FiniteGroupTable:
    """PSL_2(p): SL_2(p) with X identified with -X, identity first."""
    reps = {}
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p == 1:
                        x = (a, b, c, d)
                        neg = tuple(-v % p for v in x)
                        reps[min(pack(x, p), pack(neg, p))] = x if pack(x, p) <= pack(neg, p) else neg
    keys = sorted(reps)
    ident = pack((1, 0, 0, 1), p)
    keys.remove(ident)
    keys.insert(0, ident)
    elements = [reps[k] for k in keys]
    index = {k: i for i, k in enumerate(keys)}
    m = len(elements)
    mul = np.empty((m, m), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            z = mat_mul(x, y, p, 2)
            kz, kn = pack(z, p), pack(tuple(-v % p for v in z), p)
            mul[i, j] = index[min(kz, kn)]
    names = ["e"] + [f"g{i}" for i in range(1, m)]
    return FiniteGroupTable(mul, names)


def load_group(source) -> FiniteGroupTable:
    """Built-in ``"psl2-<p>"`` (prime ``p <= 13``), ``"c<m>"``, or a JSON table file.

    Table files hold ``{"order": m, "mul": [[...], ...], "names": [...]}``.
    """
    name = str(source)
    m = re.fullmatch(r"psl2-(\d+)", name)
    if m:
        p = int(m.group(1))
        if not is_prime(p) or p > 13:
            raise LogWitnessError(f"psl2-{p}: need a prime p <= 13")
        return _psl2(p)
    m = re.fullmatch(r"c(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return _cyclic(int(m.group(1)))
    try:
        with open(name) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise LogWitnessError(f"unknown group {name!r}") from None
    except json.JSONDecodeError as exc:
        raise LogWitnessError(f"malformed table file: {exc}") from None
    if not isinstance(data, dict) or not {"order", "mul", "names"} <= data.keys():
        raise LogWitnessError("table file needs order, mul and names")
    if data["order"] != len(data["names"]):
        raise LogWitnessError("order does not match the number of names")
    return FiniteGroupTable(np.asarray(data["mul"]), list(data["names"]))


# --- mixed identities in finite groups ------------------------------------------------


@dataclass(frozen=True)
class GroupWord:
    """``x^a0 c1 x^a1 ... ck x^ak`` with constants as element ids."""

    a0: int
    body: tuple[tuple[int, int], ...]

    def __len__(self):
        return abs(self.a0) + sum(1 + abs(a) for _, a in self.body)

    def inverse(self, G: FiniteGroupTable) -> "GroupWord":
        exps = [self.a0] + [a for _, a in self.body]
        consts = [int(G.inverse[c]) for c, _ in self.body]
        exps = [-a for a in reversed(exps)]
        consts = consts[::-1]
        return GroupWord(exps[0], tuple(zip(consts, exps[1:])))

    def sort_key(self):
        def ek(a):
            return (abs(a), a < 0)

        return (len(self), ek(self.a0), tuple((c, ek(a)) for c, a in self.body))

    def render(self, G: FiniteGroupTable) -> str:
        terms = []
        if self.a0:
            terms.append(VARIABLE if self.a0 == 1 else f"{VARIABLE}^{self.a0}")
        for c, a in self.body:
            terms.append(G.names[c])
            if a:
                terms.append(VARIABLE if a == 1 else f"{VARIABLE}^{a}")
        return " ".join(terms)


def evaluate_everywhere(G: FiniteGroupTable, w: GroupWord) -> np.ndarray:
    """``w(g)`` for every ``g`` as an array of element ids."""
    return _Evaluator(G, len(w)).word(w)


class _Evaluator:
    def __init__(self, G, max_exp):
        self.G = G
        m = G.order
        powers = {0: np.full(m, G.identity), 1: np.arange(m)}
        for a in range(2, max_exp + 1):
            powers[a] = G.mul[powers[a - 1], np.arange(m)]
        for a in range(1, max_exp + 1):
            powers[-a] = G.inverse[powers[a]]
        self.powers = powers

    def word(self, w):
        mul = self.G.mul
        val = self.powers[w.a0]
        for c, a in w.body:
            val = mul[val, c]
            if a:
                val = mul[val, self.powers[a]]
        return val


def mixed_identity_search(G: FiniteGroupTable, L: int, budget: int = 10**7) -> list[GroupWord]:
    """Words of length ``<= L`` with constants in ``G \\ Z(G)`` vanishing on all of ``G``.

    Two symmetries are quotiented out without losing any identity class:
    of ``w`` and ``w^-1`` only the one with the smaller sort key is tested, and
    when ``Z(G)`` is trivial, words that begin and end with a constant are
    skipped (conjugating by the first constant gives a shorter word).
    """
    constants = [c for c in range(G.order) if c not in G.center]
    trivial_center = len(G.center) == 1
    ev = _Evaluator(G, max(L, 1))
    mul = G.mul
    ident = G.identity
    found = []
    evaluations = 0

    def consider(a0, body, val):
        nonlocal evaluations
        w = GroupWord(a0, tuple(body))
        if body and a0 == 0 and body[-1][1] == 0 and (len(body) == 1 or trivial_center):
            return
        if w.inverse(G).sort_key() < w.sort_key():
            return
        evaluations += 1
        if evaluations > budget:
            raise ResourceError(f"more than {budget} candidate words")
        if np.all(val == ident):
            found.append(w)

    def extend(a0, body, used, val):
        for c in constants:
            if used + 1 > L:
                return
            after_c = mul[val, c]
            for a in _exponents(L - used - 1):
                new_body = body + [(c, a)]
                new_val = mul[after_c, ev.powers[a]] if a else after_c
                consider(a0, new_body, new_val)
                if a:
                    extend(a0, new_body, used + 1 + abs(a), new_val)

    for a0 in _exponents(L):
        if a0:
            consider(a0, [], ev.powers[a0])
        extend(a0, [], abs(a0), ev.powers[a0])
    found.sort(key=GroupWord.sort_key)
    return found


def _exponents(limit):
    out = [0]
    for a in range(1, limit + 1):
        out.extend((a, -a))
    return out


def element_orders(G: FiniteGroupTable) -> list[int]:
    out = []
    for g in range(G.order):
        x, k = g, 1
        while x != G.identity:
            x = int(G.mul[x, g])
            k += 1
        out.append(k)
    return out


def group_exponent(G: FiniteGroupTable) -> int:
    from math import lcm

    e = 1
    for k in element_orders(G):
        e = lcm(e, k)
    return e
