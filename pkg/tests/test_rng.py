from hypothesis import given, strategies as st

from logwitness.rng import SplitMix64


def test_reference_stream():
    # first outputs of the reference C implementation for seed 0
    r = SplitMix64(0)
    assert [r.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_below_is_multiply_shift():
    a, b = SplitMix64(12345), SplitMix64(12345)
    for m in (1, 2, 3, 7, 1000, 2**63 + 5):
        assert a.below(m) == (b.next_u64() * m) >> 64


@given(st.integers(0, 2**64 - 1), st.integers(1, 10**6))
def test_below_range(seed, m):
    assert 0 <= SplitMix64(seed).below(m) < m


def test_seed_is_taken_mod_2_64():
    assert SplitMix64(-1).next_u64() == SplitMix64(2**64 - 1).next_u64()
