"""Exact arithmetic in SL_d(Z) and the matrix image of the free group."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterator

from .errors import HeightBoundViolation, ResourceError
from .words import ConstWord, FreeWord, GeneratorSet, ball_size

DEFAULT_BIT_CAP = 1 << 20
DEFAULT_BALL_CAP = 1 << 22

# Re-check det = 1 after every product (slow; for debugging arithmetic).
VERIFY_PRODUCTS = False


def _det(rows) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class IntMatrix:
    """Immutable ``d x d`` integer matrix of determinant 1."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows, check: bool = True):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        d = len(rows)
        if d < 2 or any(len(r) != d for r in rows):
            raise ValueError("expected a square matrix of size at least 2")
        if check and _det(rows) != 1:
            raise ValueError(f"determinant of {rows} is not 1")
        self.rows = rows
        self._hash = None

    @classmethod
    def _trusted(cls, rows) -> "IntMatrix":
        m = cls.__new__(cls)
        m.rows = rows
        m._hash = None
        return m

    @classmethod
    def identity(cls, d: int) -> "IntMatrix":
        return cls._trusted(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        a, b = self.rows, other.rows
        if len(a) == 2:
            (p, q), (r, s) = a
            (e, f), (g, h) = b
            rows = ((p * e + q * g, p * f + q * h), (r * e + s * g, r * f + s * h))
        else:
            cols = tuple(zip(*b))
            rows = tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)
        out = IntMatrix._trusted(rows)
        if VERIFY_PRODUCTS and _det(rows) != 1:
            raise ArithmeticError(f"product left SL_d(Z): {rows}")
        return out

    def inverse(self) -> "IntMatrix":
        rows = self.rows
        if len(rows) == 2:
            (p, q), (r, s) = rows
            return IntMatrix._trusted(((s, -q), (-r, p)))
        return IntMatrix._trusted(_integer_inverse(rows))

    def __pow__(self, n: int) -> "IntMatrix":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = IntMatrix.identity(self.dim)
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.dim)

    def is_scalar(self) -> bool:
        rows = self.rows
        lam = rows[0][0]
        return all(rows[i][j] == (lam if i == j else 0) for i in range(len(rows)) for j in range(len(rows)))

    def max_bits(self) -> int:
        return max(abs(v).bit_length() for r in self.rows for v in r)

    def det(self) -> int:
        return _det(self.rows)

    def to_json(self) -> list[list[str]]:
        return [[str(v) for v in r] for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "IntMatrix":
        return cls([[int(v) for v in r] for r in data])


def _integer_inverse(rows):
    # Gauss-Jordan over Q; det 1 guarantees an integral result.
    n = len(rows)
    a = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = tuple(tuple(int(v) for v in r[n:]) for r in a)
    return out


def height(X: IntMatrix) -> int:
    """Largest absolute value of an entry."""
    return max(abs(v) for r in X.rows for v in r)


@dataclass(frozen=True)
class MatrixGenerators:
    gens: tuple[IntMatrix, ...]
    names: GeneratorSet | None = None

    def __post_init__(self):
        gens = tuple(self.gens)
        object.__setattr__(self, "gens", gens)
        if not gens:
            raise ValueError("need at least one generator")
        if len({g.dim for g in gens}) != 1:
            raise ValueError("generators have different dimensions")
        if self.names is None:
            object.__setattr__(self, "names", GeneratorSet.default(len(gens)))
        elif self.names.rank != len(gens):
            raise ValueError("generator names do not match generator count")

    @property
    def dim(self) -> int:
        return self.gens[0].dim

    @property
    def rank(self) -> int:
        return len(self.gens)

    @cached_property
    def M(self) -> int:
        """Maximal absolute entry over the generators and their inverses."""
        return max(height(m) for m in self.letters)

    @cached_property
    def letters(self) -> list[IntMatrix]:
        """Matrices of the letters in enumeration order ``a, a^-1, b, ...``."""
        out = []
        for g in self.gens:
            out.extend((g, g.inverse()))
        return out

    def to_json(self) -> list:
        return [g.to_json() for g in self.gens]


def sanov_generators() -> MatrixGenerators:
    return MatrixGenerators((IntMatrix(((1, 2), (0, 1))), IntMatrix(((1, 0), (2, 1)))))


def elementary_generators(d: int) -> MatrixGenerators:
    """Elementary matrices ``I + E_ij`` for ``i != j``; they generate SL_d(Z)."""
    gens = []
    for i in range(d):
        for j in range(d):
            if i != j:
                gens.append(IntMatrix(tuple(tuple(int(r == c or (r, c) == (i, j)) for c in range(d)) for r in range(d))))
    return MatrixGenerators(tuple(gens))


def load_generators(path) -> MatrixGenerators:
    """Read a JSON list of matrices, each a row-major array of decimal strings."""
    with open(path) as fh:
        data = json.load(fh)
    if data and isinstance(data[0][0], (str, int)):
        data = [data]
    return MatrixGenerators(tuple(IntMatrix.from_json(m) for m in data))


def _check_bits(X: IntMatrix, bit_cap):
    if bit_cap is not None and X.max_bits() > bit_cap:
        raise ResourceError(f"matrix entry exceeds {bit_cap} bits")


def eval_free_word(g: FreeWord, gens: MatrixGenerators, bit_cap: int | None = DEFAULT_BIT_CAP) -> IntMatrix:
    result = IntMatrix.identity(gens.dim)
    for index, exp in g.syllables:
        if index >= gens.rank:
            raise IndexError(f"generator {index} out of range for rank {gens.rank}")
        result = result @ (gens.gens[index] ** exp)
        _check_bits(result, bit_cap)
    return result


def eval_const_word(
    w: ConstWord, X: IntMatrix, gens: MatrixGenerators, bit_cap: int | None = DEFAULT_BIT_CAP
) -> IntMatrix:
    """``X^a0 C1 X^a1 ... Ck X^ak`` over the integers."""
    if X.dim != gens.dim:
        raise ValueError("dimension mismatch")
    powers: dict[int, IntMatrix] = {}

    def xpow(a):
        if a not in powers:
            powers[a] = X ** a
            _check_bits(powers[a], bit_cap)
        return powers[a]

    result = xpow(w.a0)
    for c, a in w.body:
        result = result @ eval_free_word(c, gens, bit_cap)
        if a:
            result = result @ xpow(a)
        _check_bits(result, bit_cap)
    return result


def iter_ball_images(gens: MatrixGenerators, radius: int, cap: int = DEFAULT_BALL_CAP) -> Iterator[tuple[tuple[int, ...], IntMatrix]]:
    """``(letters, matrix)`` over the free ball in length-then-lex order.

    Each image is one product away from its parent's, so the whole ball costs
    one matrix multiplication per element.
    """
    size = ball_size(gens.rank, radius)
    if size > cap:
        raise ResourceError(f"ball of radius {radius} has {size} elements (cap {cap})")
    letters = gens.letters
    layer = [((), IntMatrix.identity(gens.dim))]
    yield layer[0]
    for depth in range(radius):
        last = depth == radius - 1
        nxt = []
        for word, mat in layer:
            forbidden = word[-1] ^ 1 if word else -1
            for l, gm in enumerate(letters):
                if l != forbidden:
                    item = (word + (l,), mat @ gm)
                    if not last:
                        nxt.append(item)
                    yield item
        layer = nxt


@dataclass
class HeightReport:
    radius: int
    words_checked: int
    max_ratio: Fraction
    worst_word: FreeWord


def check_height_bound(radius: int, gens: MatrixGenerators, cap: int = DEFAULT_BALL_CAP) -> HeightReport:
    """Verify ``height(eval(g)) <= (d M)^|g|`` on the free ball of ``radius``."""
    dm = gens.dim * gens.M
    best = Fraction(0)
    worst = FreeWord()
    count = 0
    for letters, mat in iter_ball_images(gens, radius, cap):
        count += 1
        h = height(mat)
        bound = dm ** len(letters)
        if h > bound:
            raise HeightBoundViolation(FreeWord.from_letters(letters).render(gens.names), h, bound)
        ratio = Fraction(h, bound)
        if ratio > best:
            best, worst = ratio, FreeWord.from_letters(letters)
    return HeightReport(radius, count, best, worst)


def find_collision(gens: MatrixGenerators, radius: int, cap: int = DEFAULT_BALL_CAP):
    """First pair of distinct ball words with equal images.

    Returns ``(None, count)`` when the ball embeds, otherwise
    ``((earlier_word, later_word), count)``.
    """
    # Entries are bounded by (dM)^radius, so images pack into one integer.
    half = (gens.dim * gens.M) ** radius
    base = 2 * half + 1
    seen: dict[int, int] = {}
    count = 0
    for letters, mat in iter_ball_images(gens, radius, cap):
        key = 0
        for row in mat.rows:
            for v in row:
                key = key * base + v + half
        if key in seen:
            first = seen[key]
            for i, (earlier, _) in enumerate(iter_ball_images(gens, radius, cap)):
                if i == first:
                    return (FreeWord.from_letters(earlier), FreeWord.from_letters(letters)), count + 1
        seen[key] = count
        count += 1
    return None, count
