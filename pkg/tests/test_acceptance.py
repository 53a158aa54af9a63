"""Acceptance criteria, one test each.  A PASS/FAIL line per criterion is
printed in the terminal summary."""

import math
import time

import pytest

from conftest import ACCEPTANCE_LINES, GENS
from logwitness.cayley import diameter, explore, fit_log_constant, fit_slope, injectivity_radius
from logwitness.cli import main
from logwitness.intmat import check_height_bound, eval_const_word, eval_free_word, find_collision, sanov_generators
from logwitness.modp import eval_const_word_mod, reduce_generators, reduce_mod, sl_order, window_product_check
from logwitness.oracle import exact_complexity
from logwitness.pipeline import PipelineConfig, find_witness, growth_experiment, log_fit
from logwitness.primes import iter_primes_between
from logwitness.rng import SplitMix64
from logwitness.words import (
    FreeWord,
    ball_size,
    enumerate_const_words,
    random_const_word,
    random_reduced_letters,
    substitute,
)

SANOV = sanov_generators()
SWEEP_PRIMES = list(iter_primes_between(4, 101))


def record(number, title, ok, detail, seconds):
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] {number:>2}. {title}: {detail} ({seconds:.1f}s)")
    assert ok, detail


def test_01_commutation_square():
    t0 = time.perf_counter()
    rng = SplitMix64(1)
    red = {p: reduce_generators(SANOV, p) for p in (5, 101)}
    failures = 0
    for _ in range(10_000):
        w = random_const_word(rng, GENS, 1 + rng.below(20), balanced=False)
        g = FreeWord.from_letters(random_reduced_letters(rng, 4, rng.below(9)))
        X = eval_free_word(g, SANOV)
        lhs = eval_const_word(w, X, SANOV)
        if lhs != eval_free_word(substitute(w, g), SANOV):
            failures += 1
            continue
        for p, gens in red.items():
            if reduce_mod(lhs, p) != eval_const_word_mod(w, reduce_mod(X, p), gens):
                failures += 1
    seconds = time.perf_counter() - t0
    record(1, "commutation square", failures == 0 and seconds < 60, f"10000 pairs, {failures} failures", seconds)


def test_02_sanov_faithfulness():
    t0 = time.perf_counter()
    collision, count = find_collision(SANOV, 12)
    seconds = time.perf_counter() - t0
    ok = collision is None and count == ball_size(2, 12) and seconds < 120
    record(2, "Sanov faithfulness on B(12)", ok, f"{count} elements, collision={collision}", seconds)


def test_03_height_bound():
    t0 = time.perf_counter()
    rep = check_height_bound(10, SANOV)
    seconds = time.perf_counter() - t0
    ok = rep.max_ratio <= 1 and rep.words_checked == ball_size(2, 10)
    record(3, "height bound on B(10)", ok, f"{rep.words_checked} words, max height/4^|g| = {rep.max_ratio}", seconds)


def test_04_oracle_pipeline_soundness():
    t0 = time.perf_counter()
    words = list(enumerate_const_words(GENS, 6))
    rng = SplitMix64(4)
    # balanced samples satisfy w(e) = e, so the identity never serves as a witness
    words += [random_const_word(rng, GENS, 1 + rng.below(50)) for _ in range(500)]
    violations = resolved = 0
    for w in words:
        rep = find_witness(w, SANOV)
        lifted = FreeWord.from_letters(_letters(rep.lift))
        if not substitute(w, lifted):
            violations += 1
        rec = exact_complexity(w, 6, GENS)
        if rec.resolved:
            resolved += 1
            if rec.chi > rep.lift_length:
                violations += 1
    seconds = time.perf_counter() - t0
    ok = violations == 0 and seconds < 600
    record(4, "oracle/pipeline soundness", ok, f"{len(words)} words, {resolved} resolved, {violations} violations", seconds)


def _letters(text):
    from logwitness.words import parse_free_word

    return parse_free_word(text, GENS).letters()


def test_05_logarithmic_fit():
    t0 = time.perf_counter()
    ns = [10, 100, 1000, 10_000]
    rows = growth_experiment(ns, 50, SANOV, PipelineConfig(), seed=5, oracle_radius=1)
    maxima = [row["max_pipeline_bound"] for row in rows]
    fit = log_fit(ns, maxima)
    C = fit_log_constant(ns, maxima)
    seconds = time.perf_counter() - t0
    detail = (
        f"max lift per n {maxima}, slope {round(fit.C, 4) + 0.0:.4f}, SSE log {fit.sse_log:.3g} vs linear {fit.sse_linear:.3g}, "
        f"max/median {fit.spread:.2f}, fitted C {C:.4f}"
    )
    record(5, "logarithmic-length fit", fit.passed and seconds < 1800, detail, seconds)


@pytest.fixture(scope="module")
def diameters():
    t0 = time.perf_counter()
    rows = []
    for p in SWEEP_PRIMES:
        ball = explore(reduce_generators(SANOV, p))
        rows.append((p, len(ball), diameter(ball)))
    return rows, time.perf_counter() - t0


def test_06_diameter_sweep(diameters):
    rows, seconds = diameters
    complete = all(sum(rec.ball_sizes) == size == sl_order(2, p) for p, size, rec in rows)
    C = fit_log_constant([p for p, _, _ in rows], [rec.diameter for _, _, rec in rows])
    ok = complete and seconds < 600
    detail = f"{len(rows)} primes 5..101, all complete={complete}, diameter <= {C:.4f} log p"
    record(6, "diameter sweep", ok, detail, seconds)


def test_07_injectivity_sweep():
    t0 = time.perf_counter()
    radii = [injectivity_radius(p, SANOV) for p in SWEEP_PRIMES]
    slope, _ = fit_slope([math.log(p) for p in SWEEP_PRIMES], radii)
    seconds = time.perf_counter() - t0
    ok = min(radii) >= 1 and slope > 0 and seconds < 600
    record(7, "injectivity radius sweep", ok, f"radii {min(radii)}..{max(radii)}, slope vs log p {slope:.4f}", seconds)


def test_08_finite_mixed_identities():
    from logwitness.oracle import load_group, mixed_identity_search

    t0 = time.perf_counter()
    psl = mixed_identity_search(load_group("psl2-5"), 3)
    C2 = load_group("c2")
    c2 = [w.render(C2) for w in mixed_identity_search(C2, 2)]
    seconds = time.perf_counter() - t0
    ok = psl == [] and c2 == ["x^2"] and seconds < 300
    record(8, "finite mixed-identity check", ok, f"PSL2(5) L=3: {psl}, C2 L=2: {c2}", seconds)


def test_09_window_product():
    t0 = time.perf_counter()
    reps = [window_product_check(n, 4, 0.5 * 4) for n in (10, 20)]
    seconds = time.perf_counter() - t0
    detail = ", ".join(f"n={r.n}: {r.log_sum:.3f} >= {r.threshold:.0f}" for r in reps)
    record(9, "window product", all(r.passed for r in reps), detail, seconds)


def test_10_cli_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    commands = {
        "witness": ["witness", "--word", "a x a^-1 x^-1"],
        "complexity": ["complexity", "--word", "x a x b x^-1"],
        "growth": ["growth", "--n", "10,100", "--samples", "3", "--seed", "42"],
        "diameter": ["diameter", "--primes", "5,7,11"],
        "injrad": ["injrad", "--primes", "5,7,11"],
        "mifcheck": ["mifcheck", "--group", "psl2-5", "--max-length", "2"],
    }
    mismatched = []
    for name, argv in commands.items():
        outputs = []
        for run in range(2):
            path = tmp_path / f"{name}-{run}.out"
            code = main(argv + ["--out", str(path)])
            assert code == 0, name
            outputs.append(path.read_bytes())
        if outputs[0] != outputs[1] or not outputs[0]:
            mismatched.append(name)
    capsys.readouterr()
    seconds = time.perf_counter() - t0
    record(10, "CLI determinism", not mismatched, f"{len(commands)} subcommands, mismatched: {mismatched or 'none'}", seconds)
