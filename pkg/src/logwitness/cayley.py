"""Breadth-first exploration of Cayley graphs of SL_d(p)."""

from __future__ import annotations

import math
import time
from array import array
from dataclasses import dataclass

import numpy as np

from .errors import PartialBallError, ResourceError, TargetNotFoundError
from .intmat import MatrixGenerators
from .modp import (
    ModMatrix,
    mat_identity,
    mat_inverse,
    mat_mul,
    pack,
    reduce_generators,
    sl_order,
    unpack,
)
from .words import FreeWord, ball_size

DEFAULT_ELEMENT_CAP = 1 << 27
DEFAULT_PRODUCT_CAP = 10**8


class CayleyBall:
    """BFS tree of the Cayley graph over the symmetric generating set.

    Elements get dense ids in discovery order.  Letter ``2*i`` is generator
    ``i`` and ``2*i + 1`` its inverse; a child is ``parent @ letter``, so the
    parent chain read from the root spells a geodesic word.
    """

    def __init__(self, gens: list[ModMatrix], cap: int = DEFAULT_ELEMENT_CAP):
        if not gens:
            raise ValueError("no generators")
        self.p, self.d = gens[0].p, gens[0].d
        if any((g.p, g.d) != (self.p, self.d) for g in gens):
            raise ValueError("generators disagree on modulus or dimension")
        self.gens = tuple(gens)
        self.cap = cap
        self.letters = []
        for g in gens:
            self.letters.extend((g.entries, mat_inverse(g.entries, self.p, self.d)))
        root = pack(mat_identity(self.d), self.p)
        self.keys = array("q", [root]) if self.p ** (self.d * self.d) < 1 << 63 else [root]
        self.index = {root: 0}
        self.parent = array("q", [-1])
        self.label = array("b", [-1])
        # layer r occupies ids layer_starts[r] .. layer_starts[r+1]-1
        self.layer_starts = [0, 1]
        self.closed = False
        self.partial = False

    def __len__(self):
        return len(self.keys)

    @property
    def depth_reached(self) -> int:
        return len(self.layer_starts) - 2

    @property
    def complete(self) -> bool:
        return self.closed and not self.partial

    def depth(self, ident: int) -> int:
        for r in range(len(self.layer_starts) - 1):
            if ident < self.layer_starts[r + 1]:
                return r
        raise IndexError(ident)

    def layer(self, r: int) -> range:
        return range(self.layer_starts[r], self.layer_starts[r + 1])

    def element(self, ident: int) -> ModMatrix:
        return ModMatrix(self.p, self.d, unpack(self.keys[ident], self.p, self.d))

    def entries(self, ident: int):
        return unpack(self.keys[ident], self.p, self.d)

    def grow(self) -> bool:
        """Add the next BFS layer.  Returns ``False`` once nothing is left."""
        if self.closed or self.partial:
            return False
        p, d = self.p, self.d
        keys, index, parent, label = self.keys, self.index, self.parent, self.label
        start, stop = self.layer_starts[-2], self.layer_starts[-1]
        cap = self.cap
        if d == 2:
            p2, p3 = p * p, p * p * p
            for ident in range(start, stop):
                x0, rest = divmod(keys[ident], p3)
                x1, rest = divmod(rest, p2)
                x2, x3 = divmod(rest, p)
                for l, (g0, g1, g2, g3) in enumerate(self.letters):
                    k = (
                        ((x0 * g0 + x1 * g2) % p) * p3
                        + ((x0 * g1 + x1 * g3) % p) * p2
                        + ((x2 * g0 + x3 * g2) % p) * p
                        + (x2 * g1 + x3 * g3) % p
                    )
                    if k not in index:
                        if len(keys) >= cap:
                            self.partial = True
                            self.layer_starts.append(len(keys))
                            return False
                        index[k] = len(keys)
                        keys.append(k)
                        parent.append(ident)
                        label.append(l)
        else:
            for ident in range(start, stop):
                x = unpack(keys[ident], p, d)
                for l, g in enumerate(self.letters):
                    k = pack(mat_mul(x, g, p, d), p)
                    if k not in index:
                        if len(keys) >= cap:
                            self.partial = True
                            self.layer_starts.append(len(keys))
                            return False
                        index[k] = len(keys)
                        keys.append(k)
                        parent.append(ident)
                        label.append(l)
        if len(keys) == stop:
            self.closed = True
            return False
        self.layer_starts.append(len(keys))
        return True

    def grow_to(self, radius: int) -> None:
        while self.depth_reached < radius and self.grow():
            pass

    def explore(self) -> "CayleyBall":
        while self.grow():
            pass
        return self

    def word(self, ident: int) -> FreeWord:
        letters = []
        while ident > 0:
            letters.append(self.label[ident])
            ident = self.parent[ident]
        return FreeWord.from_letters(letters[::-1])

    def find(self, target: ModMatrix) -> int:
        if (target.p, target.d) != (self.p, self.d):
            raise ValueError("target lives in a different group")
        try:
            return self.index[target.key]
        except KeyError:
            raise TargetNotFoundError(f"{target.to_json()} not in explored ball") from None

    def ball_keys(self, r: int) -> list[int]:
        if r > self.depth_reached and not self.closed:
            raise PartialBallError(f"ball explored only to radius {self.depth_reached}")
        stop = self.layer_starts[min(r + 1, len(self.layer_starts) - 1)]
        return list(self.keys[:stop])


def explore(gens: list[ModMatrix], cap: int = DEFAULT_ELEMENT_CAP) -> CayleyBall:
    """Complete BFS from the identity, or a ball flagged ``partial`` at ``cap``."""
    return CayleyBall(gens, cap).explore()


@dataclass(frozen=True)
class DiameterRecord:
    p: int
    diameter: int
    ball_sizes: tuple[int, ...]


def diameter(ball: CayleyBall) -> DiameterRecord:
    if not ball.complete:
        raise PartialBallError("exploration did not complete")
    starts = ball.layer_starts
    sizes = tuple(starts[i + 1] - starts[i] for i in range(len(starts) - 1))
    return DiameterRecord(ball.p, len(sizes) - 1, sizes)


def lift(ball: CayleyBall, target: ModMatrix) -> FreeWord:
    """Geodesic word for ``target`` read off the parent links."""
    return ball.word(ball.find(target))


@dataclass(frozen=True)
class InjectivityRecord:
    p: int
    radius: int
    capped: bool
    collision: tuple[FreeWord, FreeWord] | None


def injectivity_search(p: int, gens: MatrixGenerators, radius_cap: int = 24, ball_cap: int = 1 << 22) -> InjectivityRecord:
    """Largest ``r`` with reduction mod ``p`` injective on the free ball ``B(r)``.

    Free-group words are generated in length-then-lex order; the first repeated
    image at length ``r + 1`` certifies the answer ``r``.  If no collision shows
    up by ``radius_cap`` the cap is returned with ``capped`` set.
    """
    reduced = [g.entries for g in reduce_generators(gens, p)]
    d = gens.dim
    letters = []
    for g in reduced:
        letters.extend((g, mat_inverse(g, p, d)))
    root = mat_identity(d)
    seen = {pack(root, p): 0}
    words = [()]
    layer = [(0, root)]
    for r in range(1, radius_cap + 1):
        if ball_size(gens.rank, r) > ball_cap:
            raise ResourceError(f"free ball of radius {r} exceeds cap {ball_cap}")
        nxt = []
        for ident, x in layer:
            word = words[ident]
            forbidden = word[-1] ^ 1 if word else -1
            for l, g in enumerate(letters):
                if l == forbidden:
                    continue
                y = mat_mul(x, g, p, d)
                k = pack(y, p)
                new_word = word + (l,)
                if k in seen:
                    pair = (FreeWord.from_letters(words[seen[k]]), FreeWord.from_letters(new_word))
                    return InjectivityRecord(p, r - 1, False, pair)
                seen[k] = len(words)
                words.append(new_word)
                nxt.append((seen[k], y))
        layer = nxt
    return InjectivityRecord(p, radius_cap, True, None)


def injectivity_radius(p: int, gens: MatrixGenerators, radius_cap: int = 24) -> int:
    return injectivity_search(p, gens, radius_cap).radius


@dataclass(frozen=True)
class ProductGrowth:
    radius: int
    size_A: int
    size_AAA: int
    exponent: float | None
    covers_group: bool
    covers_projective: bool


def product_growth(ball: CayleyBall, r: int, cap: int = DEFAULT_PRODUCT_CAP) -> ProductGrowth:
    """Size of ``AAA`` for ``A = B(r)`` and the exponent ``log|AAA| / log|A|``.

    ``covers_projective`` records whether ``AAA`` maps onto PSL_d(p).
    """
    p, d = ball.p, ball.d
    A = [unpack(k, p, d) for k in ball.ball_keys(r)]
    if len(A) ** 2 > cap:
        raise ResourceError(f"|A|^2 = {len(A) ** 2} products exceed cap {cap}")
    AA = {mat_mul(x, y, p, d) for x in A for y in A}
    if len(AA) * len(A) > cap:
        raise ResourceError(f"|AA||A| = {len(AA) * len(A)} products exceed cap {cap}")
    AAA = {mat_mul(x, y, p, d) for x in AA for y in A}
    order = sl_order(d, p)
    scalars = [a for a in range(1, p) if pow(a, d, p) == 1]
    projective = {min(pack(tuple(v * s % p for v in m), p) for s in scalars) for m in AAA}
    exponent = math.log(len(AAA)) / math.log(len(A)) if len(A) > 1 else None
    return ProductGrowth(
        r, len(A), len(AAA), exponent, len(AAA) == order, len(projective) == order // len(scalars)
    )


SWEEP_COLUMNS = ("p", "group_order", "diameter", "injectivity_radius", "seconds")


def sweep_row(p: int, gens: MatrixGenerators, want_diameter=True, want_injectivity=True, cap=DEFAULT_ELEMENT_CAP):
    """One CSV row; columns not requested are left empty."""
    t0 = time.perf_counter()
    row = {"p": p, "group_order": sl_order(gens.dim, p), "diameter": "", "injectivity_radius": ""}
    if want_diameter:
        ball = explore(reduce_generators(gens, p), cap)
        if ball.partial:
            raise ResourceError(f"SL_{gens.dim}({p}) exceeds element cap {cap}")
        if len(ball) != row["group_order"]:
            raise ValueError(f"generators do not generate SL_{gens.dim}({p})")
        row["diameter"] = diameter(ball).diameter
    if want_injectivity:
        row["injectivity_radius"] = injectivity_radius(p, gens)
    row["seconds"] = round(time.perf_counter() - t0, 3)
    return row


def fit_log_constant(ps, values) -> float:
    """Smallest ``C`` with ``value <= C log p`` on every row."""
    return max(v / math.log(p) for p, v in zip(ps, values))


def fit_slope(xs, ys) -> tuple[float, float]:
    """Least-squares ``(slope, intercept)``."""
    slope, intercept = np.polyfit(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), 1)
    return float(slope), float(intercept)
