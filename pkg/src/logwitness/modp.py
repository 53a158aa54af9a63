"""Reduction mod p, SL_d(p) arithmetic, prime windows and good primes."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator

from .errors import EmptyWindowError, ResourceError, WindowExhaustedError
from .intmat import IntMatrix, MatrixGenerators
from .primes import is_prime, iter_primes_between
from .words import ConstWord, FreeWord

DEFAULT_CLOSURE_CAP = 1 << 20
CERTIFICATE_BUDGET = 1 << 16
DEFAULT_MAX_PRIMES = 256


# --- flat-tuple kernels ----------------------------------------------------
# Residue matrices are row-major tuples of length d*d; these helpers are the
# hot loops of the Cayley and witness searches.


def mat_mul(a, b, p, d):
    if d == 2:
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        return (
            (a0 * b0 + a1 * b2) % p,
            (a0 * b1 + a1 * b3) % p,
            (a2 * b0 + a3 * b2) % p,
            (a2 * b1 + a3 * b3) % p,
        )
    return tuple(
        sum(a[i * d + k] * b[k * d + j] for k in range(d)) % p for i in range(d) for j in range(d)
    )


def mat_identity(d):
    return tuple(int(i == j) for i in range(d) for j in range(d))


def mat_inverse(a, p, d):
    if d == 2:
        a0, a1, a2, a3 = a
        return (a3 % p, -a1 % p, -a2 % p, a0 % p)
    aug = [list(a[i * d : (i + 1) * d]) + [int(i == j) for j in range(d)] for i in range(d)]
    for col in range(d):
        piv = next(i for i in range(col, d) if aug[i][col] % p)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [v * inv % p for v in aug[col]]
        for i in range(d):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[col])]
    return tuple(v for row in aug for v in row[d:])


def mat_pow(a, n, p, d):
    base = a if n >= 0 else mat_inverse(a, p, d)
    n = abs(n)
    result = mat_identity(d)
    while n:
        if n & 1:
            result = mat_mul(result, base, p, d)
        n >>= 1
        if n:
            base = mat_mul(base, base, p, d)
    return result


def mat_is_scalar(a, d):
    lam = a[0]
    for i in range(d):
        for j in range(d):
            if a[i * d + j] != (lam if i == j else 0):
                return False
    return True


def pack(a, p):
    key = 0
    for v in a:
        key = key * p + v
    return key


def unpack(key, p, d):
    out = [0] * (d * d)
    for i in range(d * d - 1, -1, -1):
        key, out[i] = divmod(key, p)
    return tuple(out)


# --- residue matrices ----------------------------------------------------------


@dataclass(frozen=True)
class ModMatrix:
    p: int
    d: int
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(v) % self.p for v in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != self.d * self.d:
            raise ValueError("entry count does not match dimension")

    @classmethod
    def from_rows(cls, rows, p) -> "ModMatrix":
        return cls(p, len(rows), tuple(v for r in rows for v in r))

    @classmethod
    def identity(cls, d, p) -> "ModMatrix":
        return cls(p, d, mat_identity(d))

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        d = self.d
        return tuple(self.entries[i * d : (i + 1) * d] for i in range(d))

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        if (self.p, self.d) != (other.p, other.d):
            raise ValueError("modulus or dimension mismatch")
        return ModMatrix(self.p, self.d, mat_mul(self.entries, other.entries, self.p, self.d))

    def inverse(self) -> "ModMatrix":
        return ModMatrix(self.p, self.d, mat_inverse(self.entries, self.p, self.d))

    def __pow__(self, n: int) -> "ModMatrix":
        return ModMatrix(self.p, self.d, mat_pow(self.entries, n, self.p, self.d))

    def det(self) -> int:
        from .intmat import _det

        return _det(self.rows) % self.p

    @property
    def key(self) -> int:
        return pack(self.entries, self.p)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def reduce_mod(X: IntMatrix, p: int) -> ModMatrix:
    return ModMatrix.from_rows(X.rows, p)


def reduce_generators(gens: MatrixGenerators, p: int) -> list[ModMatrix]:
    return [reduce_mod(g, p) for g in gens.gens]


def is_central(X: ModMatrix) -> bool:
    """Scalar matrices are exactly the center of SL_d(p)."""
    return mat_is_scalar(X.entries, X.d)


def eval_free_word_mod(g: FreeWord, reduced_gens: list[ModMatrix]) -> ModMatrix:
    p, d = reduced_gens[0].p, reduced_gens[0].d
    acc = mat_identity(d)
    for index, exp in g.syllables:
        acc = mat_mul(acc, mat_pow(reduced_gens[index].entries, exp, p, d), p, d)
    return ModMatrix(p, d, acc)


def eval_const_word_mod(w: ConstWord, X: ModMatrix, reduced_gens: list[ModMatrix]) -> ModMatrix:
    return ModMatrix(X.p, X.d, WordMap(w, reduced_gens)(X.entries))


class WordMap:
    """``X -> w(X)`` on SL_d(p), with the constants reduced once."""

    def __init__(self, w: ConstWord, reduced_gens: list[ModMatrix]):
        self.p = reduced_gens[0].p
        self.d = reduced_gens[0].d
        self.a0 = w.a0
        self.body = [(eval_free_word_mod(c, reduced_gens).entries, a) for c, a in w.body]
        self.exponents = sorted({abs(a) for a in w.exponents if a})

    def __call__(self, x):
        p, d = self.p, self.d
        powers = {a: mat_pow(x, a, p, d) for a in self.exponents}

        def xp(a):
            return powers[a] if a > 0 else mat_inverse(powers[-a], p, d)

        acc = xp(self.a0) if self.a0 else mat_identity(d)
        for c, a in self.body:
            acc = mat_mul(acc, c, p, d)
            if a:
                acc = mat_mul(acc, xp(a), p, d)
        return acc


def sl_order(d: int, p: int) -> int:
    """``|SL_d(p)| = p^(d(d-1)/2) * prod_{i=2}^{d} (p^i - 1)``."""
    order = p ** (d * (d - 1) // 2)
    for i in range(2, d + 1):
        order *= p**i - 1
    return order


def _closure_size(entries, p, d, limit):
    start = mat_identity(d)
    seen = {pack(start, p)}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in entries:
            y = mat_mul(x, g, p, d)
            k = pack(y, p)
            if k not in seen:
                seen.add(k)
                if len(seen) >= limit:
                    return len(seen)
                queue.append(y)
    return len(seen)


def _transvection_position(a, d):
    spot = None
    for i in range(d):
        for j in range(d):
            v = a[i * d + j]
            if i == j:
                if v != 1:
                    return None
            elif v:
                if spot is not None:
                    return None
                spot = (i, j)
    return spot


def _transvection_certificate(entries, p, d, budget):
    # A nontrivial transvection I + t E_ij generates all of {I + s E_ij}
    # (p prime), and these for all i != j generate SL_d(p).
    needed = {(i, j) for i in range(d) for j in range(d) if i != j}
    letters = []
    for g in entries:
        letters.extend((g, mat_inverse(g, p, d)))
    start = mat_identity(d)
    seen = {pack(start, p)}
    queue = deque([start])
    while queue and len(seen) < budget:
        x = queue.popleft()
        for g in letters:
            y = mat_mul(x, g, p, d)
            k = pack(y, p)
            if k in seen:
                continue
            seen.add(k)
            queue.append(y)
            spot = _transvection_position(y, d)
            if spot is not None:
                needed.discard(spot)
                if not needed:
                    return True
    return False


@lru_cache(maxsize=256)
def _generates(entries, p, d, cap):
    order = sl_order(d, p)
    if order <= cap:
        return _closure_size(entries, p, d, order) == order, "closure"
    if _transvection_certificate(entries, p, d, CERTIFICATE_BUDGET):
        return True, "transvections"
    raise ResourceError(f"|SL_{d}({p})| = {order} exceeds closure cap {cap} and no transvection certificate was found")


def generation_method(gens: list[ModMatrix], cap: int = DEFAULT_CLOSURE_CAP) -> tuple[bool, str]:
    """Whether ``gens`` generate SL_d(p), and how that was decided.

    Small groups are closed off explicitly.  Past ``cap`` elements the answer
    must come from transvections found among short words; otherwise a
    ResourceError is raised.
    """
    if not gens:
        raise ValueError("no generators")
    p, d = gens[0].p, gens[0].d
    if any((g.p, g.d) != (p, d) for g in gens):
        raise ValueError("generators disagree on modulus or dimension")
    return _generates(tuple(g.entries for g in gens), p, d, cap)


def check_generates(gens: list[ModMatrix], cap: int = DEFAULT_CLOSURE_CAP) -> bool:
    return generation_method(gens, cap)[0]


# --- prime windows ------------------------------------------------------------


@dataclass(frozen=True)
class PrimeWindow:
    """Primes ``p`` with ``C0 n < p <= C0 n^2``."""

    n: int
    C0: int

    @property
    def lo(self) -> int:
        return self.C0 * self.n

    @property
    def hi(self) -> int:
        return self.C0 * self.n * self.n

    def iter_primes(self) -> Iterator[int]:
        return iter_primes_between(self.lo, self.hi)

    @cached_property
    def primes(self) -> list[int]:
        return list(self.iter_primes())


def prime_window(n: int, C0: int) -> PrimeWindow:
    if n < 1 or C0 < 1:
        raise ValueError("n and C0 must be positive")
    window = PrimeWindow(n, C0)
    if next(window.iter_primes(), None) is None:
        raise EmptyWindowError(f"no primes in ({window.lo}, {window.hi}]")
    return window


@dataclass(frozen=True)
class WindowProductReport:
    n: int
    C0: int
    c: float
    prime_count: int
    log_sum: float
    threshold: float
    passed: bool


def window_product_check(n: int, C0: int, c: float) -> WindowProductReport:
    """Compare ``sum log p`` over the window with ``c n^2``."""
    primes = prime_window(n, C0).primes
    log_sum = math.fsum(math.log(p) for p in primes)
    threshold = c * n * n
    return WindowProductReport(n, C0, c, len(primes), log_sum, threshold, log_sum >= threshold)


# --- good primes ------------------------------------------------------------------


@dataclass(frozen=True)
class GoodPrime:
    p: int
    reduced_gens: tuple[ModMatrix, ...]
    reduced_constants: tuple[ModMatrix, ...]
    surjective: bool
    generation_method: str = "closure"


@dataclass
class PrimeDiagnostic:
    prime: int
    failed_clause: str
    constant_index: int | None = None
    detail: str = ""

    def to_dict(self):
        return {
            "prime": self.prime,
            "failed_clause": self.failed_clause,
            "constant_index": self.constant_index,
            "detail": self.detail,
        }


def examine_prime(w: ConstWord, gens: MatrixGenerators, p: int, cap: int = DEFAULT_CLOSURE_CAP):
    """``(GoodPrime, None)`` if ``p`` passes every clause, else ``(None, diagnostic)``.

    Clause (i) is vacuous over Z (every generator has denominator 1).
    """
    reduced = reduce_generators(gens, p)
    constants = []
    for i, c in enumerate(w.constants):
        cm = eval_free_word_mod(c, reduced)
        if is_central(cm):
            return None, PrimeDiagnostic(p, "iii", i + 1, "constant is central mod p")
        constants.append(cm)
    try:
        ok, method = generation_method(reduced, cap)
    except ResourceError as exc:
        return None, PrimeDiagnostic(p, "ii", None, str(exc))
    if not ok:
        return None, PrimeDiagnostic(p, "ii", None, "reduced generators do not generate SL_d(p)")
    return GoodPrime(p, tuple(reduced), tuple(constants), True, method), None


def iter_good_primes(
    w: ConstWord,
    gens: MatrixGenerators,
    n: int,
    C0: int,
    cap: int = DEFAULT_CLOSURE_CAP,
    diagnostics: list | None = None,
    max_primes: int = DEFAULT_MAX_PRIMES,
    skip=(),
) -> Iterator[GoodPrime]:
    """Good primes of the window in ascending order.

    Failures are appended to ``diagnostics``.  At most ``max_primes`` primes
    are examined, since windows for large ``n`` hold millions of primes.
    """
    examined = 0
    for p in PrimeWindow(n, C0).iter_primes():
        if p in skip:
            continue
        if examined >= max_primes:
            break
        examined += 1
        good, diag = examine_prime(w, gens, p, cap)
        if good is not None:
            yield good
        elif diagnostics is not None:
            diagnostics.append(diag)


def select_good_prime(
    w: ConstWord,
    gens: MatrixGenerators,
    n: int,
    C0: int,
    cap: int = DEFAULT_CLOSURE_CAP,
    max_primes: int = DEFAULT_MAX_PRIMES,
) -> GoodPrime:
    """Smallest prime of the window satisfying all three clauses."""
    diagnostics: list[PrimeDiagnostic] = []
    for good in iter_good_primes(w, gens, n, C0, cap, diagnostics, max_primes):
        return good
    raise WindowExhaustedError(
        f"no good prime in ({C0 * n}, {C0 * n * n}]", [d.to_dict() for d in diagnostics]
    )


def validate_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p
