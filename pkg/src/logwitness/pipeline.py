"""End-to-end witness finder.

For a word ``w`` of length ``n``: pick the smallest good prime ``p`` in the
window ``(C0 n, C0 n^2]``, walk the Cayley graph of SL_d(p) in BFS order
until the word map takes a non-central value, lift that element to a word in
the generators along the BFS tree, and verify the lift twice, once by free
reduction and once with exact integer matrices.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cayley import CayleyBall
from .errors import ResourceError, VerificationError, WindowExhaustedError
from .intmat import (
    DEFAULT_BIT_CAP,
    MatrixGenerators,
    eval_const_word,
    eval_free_word,
    sanov_generators,
)
from .modp import (
    DEFAULT_CLOSURE_CAP,
    DEFAULT_MAX_PRIMES,
    GoodPrime,
    PrimeDiagnostic,
    WordMap,
    iter_good_primes,
    mat_is_scalar,
    reduce_mod,
)
from .rng import SplitMix64
from .words import ConstWord, const_word_length, random_const_word, substitute

_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class PipelineConfig:
    C0: int = 4
    C0_max: int = 64
    element_cap: int = 1 << 22
    closure_cap: int = DEFAULT_CLOSURE_CAP
    bit_cap: int = DEFAULT_BIT_CAP
    max_primes: int = DEFAULT_MAX_PRIMES
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.C0 <= self.C0_max:
            raise ValueError("need 1 <= C0 <= C0_max")


@dataclass
class WitnessReport:
    word: str
    n: int
    p: int
    witness_mod_p: list[list[int]]
    lift: str
    lift_length: int
    exact_nontrivial: bool
    search_depth: int
    exact_check: str = "nontrivial in the free group"
    elements_scanned: int = 0
    C0: int = 4
    diagnostics: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, include_timings: bool = True) -> dict:
        out = {
            "word": self.word,
            "n": self.n,
            "p": self.p,
            "witness_mod_p": self.witness_mod_p,
            "lift": self.lift,
            "lift_length": self.lift_length,
            "exact_nontrivial": self.exact_nontrivial,
            "search_depth": self.search_depth,
            "exact_check": self.exact_check,
            "elements_scanned": self.elements_scanned,
            "C0": self.C0,
            "diagnostics": self.diagnostics,
        }
        if include_timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out


# Balls are deterministic functions of (p, generators), so they are shared
# between calls and only grown as far as some search needed.
@lru_cache(maxsize=8)
def _shared_ball(entries, p, d, cap):
    from .modp import ModMatrix

    return CayleyBall([ModMatrix(p, d, e) for e in entries], cap)


def _ball_for(good: GoodPrime, cap: int) -> CayleyBall:
    g0 = good.reduced_gens[0]
    return _shared_ball(tuple(g.entries for g in good.reduced_gens), g0.p, g0.d, cap)


def _scan(w: ConstWord, good: GoodPrime, cap: int):
    """First element in BFS order with non-central word-map value.

    Returns ``(ball, ident, value, depth, scanned)`` or ``(ball, None, ...)``.
    """
    ball = _ball_for(good, cap)
    word_map = WordMap(w, list(good.reduced_gens))
    d = ball.d
    scanned = 0
    r = 0
    while True:
        while r > ball.depth_reached:
            if not ball.grow():
                break
        if r > ball.depth_reached:
            return ball, None, None, r, scanned
        for ident in ball.layer(r):
            value = word_map(ball.entries(ident))
            scanned += 1
            if not mat_is_scalar(value, d):
                return ball, ident, value, r, scanned
        r += 1


def _exact_label(gens: MatrixGenerators) -> str:
    if gens.gens == sanov_generators().gens:
        return "nontrivial in the free group"
    return f"non-central in SL_{gens.dim}(Z)"


def find_witness(w: ConstWord, gens: MatrixGenerators, cfg: PipelineConfig | None = None) -> WitnessReport:
    cfg = cfg or PipelineConfig()
    t_start = time.perf_counter()
    n = const_word_length(w)
    # (C0 n, C0 n^2] is empty for n = 1 whatever C0 is.
    n_window = max(n, 2)
    diagnostics: list[PrimeDiagnostic] = []
    tried: set[int] = set()
    timings = {"prime_selection": 0.0, "search": 0.0, "verification": 0.0}
    C0 = cfg.C0
    while C0 <= cfg.C0_max:
        t0 = time.perf_counter()
        primes = iter_good_primes(
            w, gens, n_window, C0, cfg.closure_cap, diagnostics, cfg.max_primes, skip=frozenset(tried)
        )
        for good in primes:
            timings["prime_selection"] += time.perf_counter() - t0
            tried.add(good.p)
            t1 = time.perf_counter()
            ball, ident, value, depth, scanned = _scan(w, good, cfg.element_cap)
            timings["search"] += time.perf_counter() - t1
            if ident is None:
                reason = "element cap reached" if ball.partial else "word map central on all of SL_d(p)"
                diagnostics.append(PrimeDiagnostic(good.p, "witness", None, reason))
                t0 = time.perf_counter()
                continue
            t2 = time.perf_counter()
            report = _verify(w, gens, cfg, good.p, ball, ident, value, depth)
            timings["verification"] += time.perf_counter() - t2
            timings["total"] = time.perf_counter() - t_start
            report.elements_scanned = scanned
            report.C0 = C0
            report.diagnostics = [d.to_dict() for d in diagnostics]
            report.timings = timings
            return report
        tried.update(d.prime for d in diagnostics)
        timings["prime_selection"] += time.perf_counter() - t0
        C0 *= 2
    raise WindowExhaustedError(
        f"no witness for {w.render(gens.names)!r} with C0 up to {cfg.C0_max}",
        [d.to_dict() for d in diagnostics],
    )


def _verify(w, gens, cfg, p, ball, ident, value, depth) -> WitnessReport:
    lifted = ball.word(ident)
    if len(lifted) != depth:
        raise VerificationError(f"lift has length {len(lifted)} but BFS depth {depth}")
    free_value = substitute(w, lifted)
    exact = eval_const_word(w, eval_free_word(lifted, gens, cfg.bit_cap), gens, cfg.bit_cap)
    if reduce_mod(exact, p).entries != tuple(value):
        raise VerificationError("exact word-map value does not reduce to the mod-p witness")
    free_nontrivial = bool(free_value)
    matrix_nontrivial = not exact.is_identity()
    if free_nontrivial != matrix_nontrivial:
        raise VerificationError(
            f"free reduction says {free_nontrivial}, matrices say {matrix_nontrivial}"
        )
    d = ball.d
    return WitnessReport(
        word=w.render(gens.names),
        n=const_word_length(w),
        p=p,
        witness_mod_p=[list(value[i * d : (i + 1) * d]) for i in range(d)],
        lift=lifted.render(gens.names),
        lift_length=len(lifted),
        exact_nontrivial=free_nontrivial and not exact.is_scalar(),
        search_depth=depth,
        exact_check=_exact_label(gens),
    )


def complexity_upper_bound(w: ConstWord, gens: MatrixGenerators, cfg: PipelineConfig | None = None) -> int:
    """A certified upper bound on the complexity of ``w``."""
    return find_witness(w, gens, cfg).lift_length


GROWTH_COLUMNS = ("n", "samples", "max_oracle_chi", "max_pipeline_bound", "prime_used_max", "fitted_C", "seconds")


def row_seed(seed: int, n: int) -> int:
    """Per-row seed, so a row does not depend on which other rows are run."""
    return (seed + n * 0x9E3779B97F4A7C15) & _MASK


def growth_experiment(
    n_values,
    samples_per_n: int,
    gens: MatrixGenerators | None = None,
    cfg: PipelineConfig | None = None,
    seed: int = 0,
    oracle_radius: int = 2,
    balanced: bool = True,
) -> list[dict]:
    """Sampled estimates of the growth function, one row per ``n``.

    ``max_oracle_chi`` is a lower estimate (exact complexity of the sampled
    words, where resolved within ``oracle_radius``); ``max_pipeline_bound`` an
    upper one.  ``fitted_C`` is ``max_pipeline_bound / log n``.
    """
    from .oracle import exact_complexity

    gens = gens or sanov_generators()
    cfg = cfg or PipelineConfig()
    rows = []
    for n in n_values:
        t0 = time.perf_counter()
        rng = SplitMix64(row_seed(seed, n))
        chis, bounds, primes = [], [], []
        row = {"n": n, "samples": samples_per_n}
        try:
            for _ in range(samples_per_n):
                w = random_const_word(rng, gens.names, n, balanced)
                report = find_witness(w, gens, cfg)
                bounds.append(report.lift_length)
                primes.append(report.p)
                record = exact_complexity(w, oracle_radius, gens.names)
                if record.resolved:
                    chis.append(record.chi)
        except (ResourceError, WindowExhaustedError, VerificationError) as exc:
            row.update(max_oracle_chi="", max_pipeline_bound="", prime_used_max="", fitted_C="error")
            row["error"] = str(exc)
        else:
            best = max(bounds)
            row.update(
                max_oracle_chi=max(chis) if chis else "",
                max_pipeline_bound=best,
                prime_used_max=max(primes),
                fitted_C=round(best / math.log(max(n, 2)), 6),
            )
            row["bounds"] = bounds
        row["seconds"] = round(time.perf_counter() - t0, 3)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class LogFit:
    C: float
    intercept: float
    sse_log: float
    sse_linear: float
    spread: float
    passed: bool


def log_fit(ns, maxima) -> LogFit:
    """Compare ``y = a + C log n`` against ``y = a + b n`` by least squares.

    Passes when ``C >= 0``, the logarithmic model fits at least as well as
    the linear one, and the largest maximum is at most three times the median
    one (``spread``).
    """
    x = np.log(np.asarray(ns, dtype=float))
    y = np.asarray(maxima, dtype=float)
    C, a = np.polyfit(x, y, 1)
    sse_log = float(np.sum((y - (a + C * x)) ** 2))
    b, a_lin = np.polyfit(np.asarray(ns, dtype=float), y, 1)
    sse_linear = float(np.sum((y - (a_lin + b * np.asarray(ns, dtype=float))) ** 2))
    spread = float(max(maxima)) / max(statistics.median(maxima), 1)
    tol = 1e-9 * (1 + sse_linear)
    passed = C >= -1e-12 and sse_log <= sse_linear + tol and spread <= 3
    return LogFit(float(C), float(a), sse_log, sse_linear, spread, passed)
