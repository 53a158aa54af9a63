import math

import pytest

import logwitness.pipeline as pipeline
from conftest import GENS
from logwitness.errors import WindowExhaustedError
from logwitness.intmat import elementary_generators, eval_const_word, eval_free_word
from logwitness.modp import eval_const_word_mod, examine_prime, is_central, reduce_generators, reduce_mod
from logwitness.oracle import exact_complexity
from logwitness.pipeline import PipelineConfig, find_witness, growth_experiment, log_fit, row_seed
from logwitness.words import enumerate_const_words, parse_const_word, parse_free_word

COMMUTATOR = "x a x^-1 a^-1"
NESTED = "(x a x^-1 a^-1)(x b x^-1 b^-1)(x a x^-1 a^-1)^-1(x b x^-1 b^-1)^-1"


def test_commutator_example(sanov):
    w = parse_const_word(COMMUTATOR, GENS)
    rep = find_witness(w, sanov)
    assert (rep.p, rep.lift, rep.lift_length, rep.search_depth) == (17, "b", 1, 1)
    assert rep.exact_nontrivial and rep.exact_check == "nontrivial in the free group"
    g = parse_free_word(rep.lift, GENS)
    value = eval_const_word(w, eval_free_word(g, sanov), sanov)
    assert [list(r) for r in reduce_mod(value, 17).rows] == rep.witness_mod_p
    assert not value.is_identity()


def test_single_letter_word(sanov):
    # n = 1 has an empty window, so the search runs over the n = 2 window
    rep = find_witness(parse_const_word("x", GENS), sanov)
    assert (rep.p, rep.lift) == (11, "a")


def test_nested_commutator(sanov):
    w = parse_const_word(NESTED, GENS)
    rep = find_witness(w, sanov)
    assert rep.n == 16 and rep.lift == "a b" and rep.p == 67
    assert exact_complexity(w, 2, GENS).chi == 2


def test_minimality_of_bfs_scan(sanov):
    # every element strictly closer to the identity has central word-map value
    w = parse_const_word("x a x b x^-1 a^-1 x^-1 b^-1", GENS)
    rep = find_witness(w, sanov)
    red = reduce_generators(sanov, rep.p)
    ball = pipeline._ball_for(examine_prime(w, sanov, rep.p)[0], 1 << 22)
    for ident in range(ball.layer_starts[rep.search_depth]):
        assert is_central(eval_const_word_mod(w, ball.element(ident), red))


def test_upper_bounds_are_sound(sanov):
    # the certified bound never undercuts exact complexity
    for w in enumerate_const_words(GENS, 4):
        rep = find_witness(w, sanov)
        chi = exact_complexity(w, rep.lift_length, GENS).chi
        assert chi is not None and chi <= rep.lift_length


def test_deterministic(sanov):
    w = parse_const_word(NESTED, GENS)
    a = find_witness(w, sanov).to_dict(include_timings=False)
    b = find_witness(w, sanov).to_dict(include_timings=False)
    assert a == b and "timings" not in a
    assert set(find_witness(w, sanov).to_dict()["timings"]) >= {"search", "total"}


def test_escalation_to_next_prime(sanov, monkeypatch):
    # x^60 vanishes on SL_2(5) (exponent 60) but not on SL_2(7)
    w = parse_const_word("x^60", GENS)

    def fake(w, gens, n, C0, cap, diagnostics, max_primes, skip=()):
        for p in (5, 7):
            if p not in skip:
                yield examine_prime(w, gens, p)[0]

    monkeypatch.setattr(pipeline, "iter_good_primes", fake)
    rep = find_witness(w, sanov)
    assert rep.p == 7
    assert rep.diagnostics[0]["prime"] == 5
    assert rep.diagnostics[0]["failed_clause"] == "witness"


def test_exhausted_window(sanov):
    w = parse_const_word(COMMUTATOR, GENS)
    with pytest.raises(WindowExhaustedError) as info:
        find_witness(w, sanov, PipelineConfig(max_primes=0))
    assert info.value.diagnostics == []


def test_c0_doubling(sanov, monkeypatch):
    # pretend the first window has no good prime
    real = pipeline.iter_good_primes

    def fake(w, gens, n, C0, *args, **kwargs):
        return iter(()) if C0 == 2 else real(w, gens, n, C0, *args, **kwargs)

    monkeypatch.setattr(pipeline, "iter_good_primes", fake)
    w = parse_const_word(COMMUTATOR, GENS)
    rep = find_witness(w, sanov, PipelineConfig(C0=2))
    assert rep.C0 == 4 and rep.p == 17
    with pytest.raises(WindowExhaustedError):
        find_witness(w, sanov, PipelineConfig(C0=2, C0_max=3))


def test_higher_dimension():
    gens = elementary_generators(3)
    w = parse_const_word("x a x^-1 a^-1", gens.names)
    rep = find_witness(w, gens)
    assert rep.exact_check == "non-central in SL_3(Z)"
    assert rep.exact_nontrivial


def test_growth_rows_deterministic(sanov):
    a = growth_experiment([4, 6], 3, sanov, seed=7)
    b = growth_experiment([6], 3, sanov, seed=7)
    strip = lambda row: {k: v for k, v in row.items() if k != "seconds"}
    assert strip(a[1]) == strip(b[0])
    assert a[0]["fitted_C"] == round(a[0]["max_pipeline_bound"] / math.log(4), 6)
    assert row_seed(0, 1) == 0x9E3779B97F4A7C15


def test_growth_error_row(sanov):
    rows = growth_experiment([4], 2, sanov, PipelineConfig(max_primes=0), seed=1)
    assert rows[0]["fitted_C"] == "error"


def test_log_fit():
    ns = [10, 100, 1000, 10000]
    fit = log_fit(ns, [2, 4, 6, 8])
    assert fit.passed and fit.C == pytest.approx(2 / math.log(10))
    assert not log_fit(ns, [1, 10, 100, 1000]).passed
    assert log_fit(ns, [1, 1, 1, 1]).passed
